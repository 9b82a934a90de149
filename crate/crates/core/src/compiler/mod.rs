//! Lowering of logical gates to pulse schedules.
//!
//! Logical qubit `m` is 1-based here; circuit files use 0-based targets.
//! Every construction conjugates a free or pulsed evolution by encoded
//! `x` pulses so that unwanted terms change sign and cancel.

mod circuit;
mod euler;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;

use crate::encoding::{embed_single, zz_phase, Sector};
use crate::error::{Error, Result};
use crate::evolution::{PulseSchedule, PulseStep};
use crate::model::{BackgroundTerm, ExchangeModel, ModelKind, TermHandle};
use crate::pauli::CMatrix;

pub use circuit::{circuit_from_json, circuit_to_json};
pub use euler::{phase_distance, rx_matrix, rz_matrix, xzx_angles, xzx_matrix};

const NEGLIGIBLE: f64 = 1e-14;

/// A gate on encoded qubits; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogicalGate {
    Rx {
        m: usize,
        theta: f64,
    },
    Rz {
        m: usize,
        theta: f64,
    },
    /// `Rx(α)·Rz(β)·Rx(γ)`.
    Euler {
        m: usize,
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    /// Z⊗Z phase `exp(iπ/4 Z_m Z_{m+1})`, or exact CPHASE with `exact_cphase`.
    Cphase {
        m: usize,
    },
    /// `exp(−i J t σ_{2m}^z σ_{2m+1}^z)` on a Heisenberg chain.
    HeisZz {
        m: usize,
        t: f64,
    },
}

impl LogicalGate {
    pub fn name(&self) -> &'static str {
        match self {
            LogicalGate::Rx { .. } => "rx",
            LogicalGate::Rz { .. } => "rz",
            LogicalGate::Euler { .. } => "euler",
            LogicalGate::Cphase { .. } => "cphase",
            LogicalGate::HeisZz { .. } => "heis_zz",
        }
    }

    /// Logical qubits touched, 1-based.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            LogicalGate::Rx { m, .. } | LogicalGate::Rz { m, .. } | LogicalGate::Euler { m, .. } => {
                vec![m]
            }
            LogicalGate::Cphase { m } | LogicalGate::HeisZz { m, .. } => vec![m, m + 1],
        }
    }
}

impl fmt::Display for LogicalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LogicalGate::Rx { m, theta } => write!(f, "rx({theta:.6}) q{}", m - 1),
            LogicalGate::Rz { m, theta } => write!(f, "rz({theta:.6}) q{}", m - 1),
            LogicalGate::Euler { m, alpha, beta, gamma } => {
                write!(f, "euler({alpha:.6}, {beta:.6}, {gamma:.6}) q{}", m - 1)
            }
            LogicalGate::Cphase { m } => write!(f, "cphase q{},q{}", m - 1, m),
            LogicalGate::HeisZz { m, t } => write!(f, "heis_zz({t:.6}) q{},q{}", m - 1, m),
        }
    }
}

/// Compilation switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    /// Pulse the two encoded `x` generators of a CPHASE refocusing in one group.
    pub parallel: bool,
    /// Append the local `rz(π/2)` corrections that turn the Z⊗Z phase into CPHASE.
    pub exact_cphase: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { parallel: true, exact_cphase: false }
    }
}

fn sector(model: &ExchangeModel) -> Result<Sector> {
    model.kind().sector().ok_or_else(|| Error::UnsupportedGate(format!("{} models carry no code", model.kind().name())))
}

fn check_qubit(model: &ExchangeModel, m: usize) -> Result<()> {
    if m == 0 || m > model.n_logical() {
        Err(Error::IndexOutOfRange(format!("logical qubit {} of {}", m as isize - 1, model.n_logical())))
    } else {
        Ok(())
    }
}

fn check_pair(model: &ExchangeModel, m: usize) -> Result<()> {
    check_qubit(model, m)?;
    if m + 1 > model.n_logical() {
        return Err(Error::IndexOutOfRange(format!("logical pair ({},{}) of {}", m - 1, m, model.n_logical())));
    }
    Ok(())
}

/// Handle whose pulse acts as encoded `X` on qubit `m`.
fn x_handle(model: &ExchangeModel, m: usize) -> Result<TermHandle> {
    let (i, j) = (2 * m - 1, 2 * m);
    let h = match model.kind() {
        ModelKind::Heisenberg => TermHandle::Heis(i, j),
        ModelKind::Xy | ModelKind::XxzSymmetric => TermHandle::JPlus(i, j),
        ModelKind::XxzAntisymmetric => TermHandle::JMinus(i, j),
        ModelKind::NmrIsing => return Err(Error::UnsupportedGate("rx on an uncoded model".into())),
    };
    model.require(h)?;
    Ok(h)
}

/// Nonnegative representative of `x` modulo `period`, snapping to 0.
fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r < NEGLIGIBLE * period.max(1.0) || period - r < NEGLIGIBLE * period.max(1.0) {
        0.0
    } else {
        r
    }
}

/// One pulse of the encoded `x` generator: `exp(−iθX/2)` on the code.
pub fn compile_rx(m: usize, theta: f64, model: &ExchangeModel) -> Result<PulseSchedule> {
    check_qubit(model, m)?;
    sector(model)?;
    let h = x_handle(model, m)?;
    let mut s = PulseSchedule::new();
    if theta.abs() > NEGLIGIBLE {
        s.push_step(PulseStep::pulse(h, theta / 2.0));
    }
    Ok(s)
}

/// Free evolution of `ε_m T_m^z` (or `ε_m⁺ R_m^z`), refocused on every
/// other logical qubit by conjugating with their encoded `x` pulses.
pub fn compile_rz(m: usize, theta: f64, model: &ExchangeModel) -> Result<PulseSchedule> {
    check_qubit(model, m)?;
    let sec = sector(model)?;
    let (eps, focus) = match sec {
        Sector::AxialSymmetric => (model.eps_minus(m)?, BackgroundTerm::EpsMinus(m)),
        Sector::AxialAntisymmetric => (model.eps_plus(m)?, BackgroundTerm::EpsPlus(m)),
    };
    if eps.abs() < 1e-12 {
        let which = if sec == Sector::AxialSymmetric { "ε⁻" } else { "ε⁺" };
        return Err(Error::DegenerateSpectrum {
            qubit: m - 1,
            detail: format!("{which} = 0, so free evolution cannot rotate about z"),
        });
    }
    let others = (1..=model.n_logical()).filter(|&q| q != m).collect::<Vec<_>>();
    let handles = others.iter().map(|&q| x_handle(model, q)).collect::<Result<Vec<_>>>()?;
    let mut s = PulseSchedule::new();
    // Free evolution for τ applies exp(−iτε Z_m); the code phase has period π/|ε|.
    if handles.is_empty() {
        let tau = wrap(theta / (2.0 * eps), PI / eps.abs());
        if tau > 0.0 {
            s.push_step(PulseStep::free(tau, vec![focus]));
        }
        return Ok(s);
    }
    let tau = wrap(theta / (4.0 * eps), FRAC_PI_2 / eps.abs());
    if tau == 0.0 {
        return Ok(s);
    }
    s.push_step(PulseStep::free(tau, vec![focus]));
    s.push_group(handles.iter().map(|&h| PulseStep::pulse(h, FRAC_PI_2)).collect());
    s.push_step(PulseStep::free(tau, vec![focus]));
    s.push_group(handles.iter().map(|&h| PulseStep::pulse(h, -FRAC_PI_2)).collect());
    Ok(s)
}

/// `Rx(α)·Rz(β)·Rx(γ)` with vanishing factors elided.
pub fn compile_euler(m: usize, alpha: f64, beta: f64, gamma: f64, model: &ExchangeModel) -> Result<PulseSchedule> {
    check_qubit(model, m)?;
    sector(model)?;
    if wrap(beta, 2.0 * PI) == 0.0 {
        // Rz(2πk) = ±I, so the two x rotations merge.
        return compile_rx(m, alpha + gamma, model);
    }
    let mut s = compile_rx(m, gamma, model)?;
    s.append(compile_rz(m, beta, model)?);
    s.append(compile_rx(m, alpha, model)?);
    Ok(s)
}

/// Euler schedule for an arbitrary 2×2 unitary on qubit `m`.
pub fn compile_unitary(m: usize, u: &CMatrix, model: &ExchangeModel) -> Result<PulseSchedule> {
    let (alpha, beta, gamma) = xzx_angles(u)?;
    compile_euler(m, alpha, beta, gamma, model)
}

/// Z⊗Z phase between qubits `m` and `m+1` from the `J^z` coupling of
/// spins `(2m, 2m+1)`, with both qubits' `ε` terms refocused.
pub fn compile_cphase_xxz(m: usize, model: &ExchangeModel, parallel: bool) -> Result<PulseSchedule> {
    check_pair(model, m)?;
    let sec = sector(model)?;
    if !matches!(model.kind(), ModelKind::XxzSymmetric | ModelKind::XxzAntisymmetric) {
        return Err(Error::UnsupportedGate(format!(
            "the J^z construction needs an XXZ model, not {}",
            model.kind().name()
        )));
    }
    let (b, c) = (2 * m, 2 * m + 1);
    let coupling =
        model.coupling(b, c).ok_or_else(|| Error::Connectivity(format!("no coupling between spins {b} and {c}")))?;
    let jz = coupling.jz;
    // σ_b^z σ_c^z acts as −Z⊗Z on the symmetric code and +Z⊗Z on the antisymmetric one.
    let sign = if sec == Sector::AxialSymmetric { -1.0 } else { 1.0 };
    let zz_handle = TermHandle::Jz(b, c);
    let interaction = if model.is_controllable(zz_handle) {
        // Two pulses of angle φ give exp(−2iφ sign Z⊗Z).
        PulseStep::pulse(zz_handle, -sign * FRAC_PI_4 / 2.0)
    } else {
        if jz.abs() < 1e-12 {
            return Err(Error::UnsupportedGate(format!("J^z({b},{c}) vanishes")));
        }
        let tau = wrap(-sign * FRAC_PI_4 / (2.0 * jz), FRAC_PI_2 / jz.abs());
        PulseStep::free(tau, vec![BackgroundTerm::Zz(b, c)])
    };
    let hx = [x_handle(model, m)?, x_handle(model, m + 1)?];
    let mut s = PulseSchedule::new();
    for half in [FRAC_PI_2, -FRAC_PI_2] {
        s.push_step(interaction.clone());
        if parallel {
            s.push_group(hx.iter().map(|&h| PulseStep::pulse(h, half)).collect());
        } else {
            for &h in &hx {
                s.push_step(PulseStep::pulse(h, half));
            }
        }
    }
    Ok(s)
}

/// Z⊗Z phase on an XY chain from nested conjugations:
/// `C_{½T₁₃}∘C_{T₁₂}∘T₂₃ = σ₂ᶻ(σ₃ᶻ − σ₁ᶻ)/2` (spins relative to the block).
pub fn compile_cphase_xy(m: usize, model: &ExchangeModel) -> Result<PulseSchedule> {
    check_pair(model, m)?;
    if sector(model)? != Sector::AxialSymmetric || model.kind() == ModelKind::Heisenberg {
        return Err(Error::UnsupportedGate(format!(
            "the XY construction needs J⁺ control, not a {} model",
            model.kind().name()
        )));
    }
    let (a, b, c) = (2 * m - 1, 2 * m, 2 * m + 1);
    let t13 = TermHandle::JPlus(a, c);
    if !model.is_controllable(t13) {
        return Err(Error::Connectivity(format!("next-nearest-neighbour handle `{t13}` is not available")));
    }
    let t12 = TermHandle::JPlus(a, b);
    let t23 = TermHandle::JPlus(b, c);
    model.require(t12)?;
    model.require(t23)?;
    // On the code σ₂ᶻσ₃ᶻ = −Z⊗Z and σ₁ᶻσ₂ᶻ = −1, so angle π/2 gives exp(iπ/4 Z⊗Z).
    Ok(PulseSchedule::from_groups(vec![
        vec![PulseStep::pulse(t13, -FRAC_PI_4)],
        vec![PulseStep::pulse(t12, -FRAC_PI_2)],
        vec![PulseStep::pulse(t23, FRAC_PI_2)],
        vec![PulseStep::pulse(t12, FRAC_PI_2)],
        vec![PulseStep::pulse(t13, FRAC_PI_4)],
    ]))
}

/// `exp(−iJtσ_{2m}^zσ_{2m+1}^z)` on a Heisenberg chain.
///
/// Two half-pulses of `h = J Σ_α σ^α σ^α` bracket `exp(−iπT_m^z) = σσ` on
/// qubit `m`, which flips the sign of the transverse part of `h`; a second
/// `exp(−iπT_m^z)`, conjugated by the encoded `x` pulse, undoes it.
pub fn compile_heis_zz(m: usize, t: f64, model: &ExchangeModel) -> Result<PulseSchedule> {
    check_pair(model, m)?;
    if model.kind() != ModelKind::Heisenberg {
        return Err(Error::UnsupportedGate(format!("heis_zz needs a Heisenberg model, not {}", model.kind().name())));
    }
    let (a, b, c) = (2 * m - 1, 2 * m, 2 * m + 1);
    let bond = TermHandle::Heis(b, c);
    model.require(bond)?;
    let j =
        model.coupling(b, c).ok_or_else(|| Error::Connectivity(format!("no coupling between spins {b} and {c}")))?.jz;
    let flip = TermHandle::Heis(a, b);
    model.require(flip)?;
    let eps = model.eps_minus(m)?;
    if eps.abs() < 1e-12 {
        return Err(Error::DegenerateSpectrum {
            qubit: m - 1,
            detail: "ε⁻ = 0, so free evolution cannot generate T^z".into(),
        });
    }
    let tau = PI / eps.abs();
    let focus = vec![BackgroundTerm::EpsMinus(m)];
    Ok(PulseSchedule::from_groups(vec![
        vec![PulseStep::pulse(bond, j * t)],
        vec![PulseStep::free(tau, focus.clone())],
        vec![PulseStep::pulse(bond, j * t)],
        vec![PulseStep::pulse(flip, -FRAC_PI_2)],
        vec![PulseStep::free(tau, focus)],
        vec![PulseStep::pulse(flip, FRAC_PI_2)],
    ]))
}

/// Entangling gate appropriate to the model family.
pub fn compile_cphase(m: usize, model: &ExchangeModel, opts: CompileOptions) -> Result<PulseSchedule> {
    let mut s = match model.kind() {
        ModelKind::Xy => compile_cphase_xy(m, model)?,
        ModelKind::XxzSymmetric | ModelKind::XxzAntisymmetric => compile_cphase_xxz(m, model, opts.parallel)?,
        ModelKind::Heisenberg => {
            check_pair(model, m)?;
            let j = model
                .coupling(2 * m, 2 * m + 1)
                .ok_or_else(|| Error::Connectivity(format!("no coupling between spins {} and {}", 2 * m, 2 * m + 1)))?
                .jz;
            compile_heis_zz(m, FRAC_PI_4 / j, model)?
        }
        ModelKind::NmrIsing => return Err(Error::UnsupportedGate("cphase on an uncoded model".into())),
    };
    if opts.exact_cphase {
        s.append(compile_rz(m, FRAC_PI_2, model)?);
        s.append(compile_rz(m + 1, FRAC_PI_2, model)?);
    }
    Ok(s)
}

pub fn compile_gate(g: &LogicalGate, model: &ExchangeModel, opts: CompileOptions) -> Result<PulseSchedule> {
    let s = match *g {
        LogicalGate::Rx { m, theta } => compile_rx(m, theta, model)?,
        LogicalGate::Rz { m, theta } => compile_rz(m, theta, model)?,
        LogicalGate::Euler { m, alpha, beta, gamma } => compile_euler(m, alpha, beta, gamma, model)?,
        LogicalGate::Cphase { m } => compile_cphase(m, model, opts)?,
        LogicalGate::HeisZz { m, t } => compile_heis_zz(m, t, model)?,
    };
    Ok(s.with_target(g.to_string()))
}

/// Gates compiled in order and concatenated; errors carry the gate index.
pub fn compile_circuit(gates: &[LogicalGate], model: &ExchangeModel, opts: CompileOptions) -> Result<PulseSchedule> {
    let mut s = PulseSchedule::new();
    for (index, g) in gates.iter().enumerate() {
        let part = compile_gate(g, model, opts).map_err(|e| Error::Gate { index, source: Box::new(e) })?;
        s.append(part);
    }
    let names: Vec<_> = gates.iter().map(|g| g.to_string()).collect();
    Ok(s.with_target(names.join("; ")))
}

/// CPHASE `diag(1, 1, 1, −1)` on qubits `m`, `m+1`.
fn cphase_matrix(m: usize, n_logical: usize) -> CMatrix {
    let dim = 1 << n_logical;
    CMatrix::from_fn(dim, dim, |r, c| {
        let both = (r >> (m - 1)) & (r >> m) & 1;
        match (r == c, both) {
            (false, _) => Complex64::new(0.0, 0.0),
            (true, 1) => Complex64::new(-1.0, 0.0),
            (true, _) => Complex64::new(1.0, 0.0),
        }
    })
}

/// Logical unitary a gate is compiled to realize (up to global phase).
pub fn target_unitary(g: &LogicalGate, model: &ExchangeModel, opts: CompileOptions) -> Result<CMatrix> {
    let n = model.n_logical();
    match *g {
        LogicalGate::Rx { m, theta } => embed_single(&rx_matrix(theta), m, n),
        LogicalGate::Rz { m, theta } => embed_single(&rz_matrix(theta), m, n),
        LogicalGate::Euler { m, alpha, beta, gamma } => embed_single(&xzx_matrix(alpha, beta, gamma), m, n),
        LogicalGate::Cphase { m } => {
            check_pair(model, m)?;
            if opts.exact_cphase {
                Ok(cphase_matrix(m, n))
            } else {
                zz_phase(FRAC_PI_4, m, n)
            }
        }
        LogicalGate::HeisZz { m, t } => {
            check_pair(model, m)?;
            let j = model
                .coupling(2 * m, 2 * m + 1)
                .ok_or_else(|| Error::Connectivity(format!("no coupling between spins {} and {}", 2 * m, 2 * m + 1)))?
                .jz;
            // −σ₂ᶻσ₃ᶻ = Z⊗Z on the symmetric code.
            zz_phase(j * t, m, n)
        }
    }
}

/// Product of gate targets, first gate applied first.
pub fn circuit_target(gates: &[LogicalGate], model: &ExchangeModel, opts: CompileOptions) -> Result<CMatrix> {
    let dim = 1 << model.n_logical();
    let mut u = CMatrix::identity(dim, dim);
    for (index, g) in gates.iter().enumerate() {
        let t = target_unitary(g, model, opts).map_err(|e| Error::Gate { index, source: Box::new(e) })?;
        u = t * u;
    }
    Ok(u)
}
