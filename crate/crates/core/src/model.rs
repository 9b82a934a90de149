//! Exchange Hamiltonians and per-platform controllability.
//!
//! The general coupling between spins `i < j` is written in the axially
//! symmetric form `J⁻ R_ij^x + J⁺ T_ij^x + J^z σ_i^z σ_j^z` with
//! `J^± = J^x ± J^y`, which equals `J^x σˣσˣ + J^y σʸσʸ + J^z σᶻσᶻ`.
//! The free Hamiltonian is `H₀ = Σ ½ ε_i σ_i^z`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::encoding::Sector;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum};

const COUPLING_TOL: f64 = 1e-12;

/// Hamiltonian family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Heisenberg,
    Xy,
    XxzSymmetric,
    XxzAntisymmetric,
    NmrIsing,
}

impl ModelKind {
    /// Code sector the family computes in, if any.
    pub fn sector(self) -> Option<Sector> {
        match self {
            ModelKind::Heisenberg | ModelKind::Xy | ModelKind::XxzSymmetric => Some(Sector::AxialSymmetric),
            ModelKind::XxzAntisymmetric => Some(Sector::AxialAntisymmetric),
            ModelKind::NmrIsing => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Heisenberg => "heisenberg",
            ModelKind::Xy => "xy",
            ModelKind::XxzSymmetric => "xxz_symmetric",
            ModelKind::XxzAntisymmetric => "xxz_antisymmetric",
            ModelKind::NmrIsing => "nmr_ising",
        }
    }

    fn check_coupling(self, c: &Coupling) -> Result<()> {
        let eq = |a: f64, b: f64| (a - b).abs() <= COUPLING_TOL;
        let ok = match self {
            ModelKind::Heisenberg => eq(c.jx, c.jy) && eq(c.jy, c.jz),
            ModelKind::Xy => eq(c.jx, c.jy) && eq(c.jz, 0.0),
            ModelKind::XxzSymmetric => eq(c.jx, c.jy),
            ModelKind::XxzAntisymmetric => eq(c.jx, -c.jy),
            ModelKind::NmrIsing => eq(c.jx, 0.0) && eq(c.jy, 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "coupling ({},{}) with J = ({}, {}, {}) is not of {} form",
                c.i,
                c.j,
                c.jx,
                c.jy,
                c.jz,
                self.name()
            )))
        }
    }
}

/// Fixed exchange constants of one spin pair (1-based, `i < j`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    #[serde(default)]
    pub jx: f64,
    #[serde(default)]
    pub jy: f64,
    #[serde(default)]
    pub jz: f64,
}

impl Coupling {
    pub fn new(i: usize, j: usize, jx: f64, jy: f64, jz: f64) -> Self {
        Coupling { i, j, jx, jy, jz }
    }

    pub fn isotropic(i: usize, j: usize, value: f64) -> Self {
        Coupling::new(i, j, value, value, value)
    }

    pub fn j_plus(&self) -> f64 {
        self.jx + self.jy
    }

    pub fn j_minus(&self) -> f64 {
        self.jx - self.jy
    }
}

/// A toggleable Hamiltonian term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermHandle {
    /// `J⁺_ij`: pulses `T_ij^x`.
    JPlus(usize, usize),
    /// `J⁻_ij`: pulses `R_ij^x`.
    JMinus(usize, usize),
    /// `J^z_ij`: pulses `σ_i^z σ_j^z`.
    Jz(usize, usize),
    /// Isotropic exchange: pulses `T_ij^x + ½ σ_i^z σ_j^z`.
    Heis(usize, usize),
    /// External transverse field `σ_i^x` (NMR only).
    FieldX(usize),
    /// Single-spin energy: pulses `½ σ_i^z`.
    Epsilon(usize),
    /// Uniform field: pulses `½ Σ σ_i^z`.
    GlobalZ,
    /// Every control off; the background evolves.
    Free,
}

impl TermHandle {
    pub fn pair(self) -> Option<(usize, usize)> {
        match self {
            TermHandle::JPlus(i, j) | TermHandle::JMinus(i, j) | TermHandle::Jz(i, j) | TermHandle::Heis(i, j) => {
                Some((i, j))
            }
            _ => None,
        }
    }

    /// Spins the generator acts on; `None` means global.
    pub fn support(self) -> Option<Vec<usize>> {
        match self {
            TermHandle::FieldX(i) | TermHandle::Epsilon(i) => Some(vec![i]),
            TermHandle::GlobalZ | TermHandle::Free => None,
            h => h.pair().map(|(i, j)| vec![i, j]),
        }
    }

    fn allowed_for(self, kind: ModelKind) -> bool {
        use ModelKind::*;
        match self {
            TermHandle::JPlus(..) => matches!(kind, Xy | XxzSymmetric),
            TermHandle::JMinus(..) => kind == XxzAntisymmetric,
            TermHandle::Jz(..) => matches!(kind, XxzSymmetric | XxzAntisymmetric | NmrIsing),
            TermHandle::Heis(..) => kind == Heisenberg,
            TermHandle::FieldX(..) => kind == NmrIsing,
            TermHandle::Epsilon(..) | TermHandle::GlobalZ | TermHandle::Free => true,
        }
    }
}

impl fmt::Display for TermHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermHandle::JPlus(i, j) => write!(f, "j_plus({i},{j})"),
            TermHandle::JMinus(i, j) => write!(f, "j_minus({i},{j})"),
            TermHandle::Jz(i, j) => write!(f, "j_z({i},{j})"),
            TermHandle::Heis(i, j) => write!(f, "heis({i},{j})"),
            TermHandle::FieldX(i) => write!(f, "field_x({i})"),
            TermHandle::Epsilon(i) => write!(f, "epsilon({i})"),
            TermHandle::GlobalZ => f.write_str("global_z"),
            TermHandle::Free => f.write_str("free"),
        }
    }
}

/// Splits `name(a,b,...)` into the name and its integer arguments.
fn parse_call(s: &str) -> Result<(String, Vec<usize>)> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s.to_ascii_lowercase(), Vec::new()));
    };
    let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| Error::Parse(format!("missing `)` in `{s}`")))?;
    let args = inner
        .split(',')
        .map(|a| a.trim().parse::<usize>().map_err(|e| Error::Parse(format!("`{s}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((s[..open].trim().to_ascii_lowercase(), args))
}

impl FromStr for TermHandle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = parse_call(s)?;
        let bad = || Error::Parse(format!("unknown term handle `{s}`"));
        Ok(match (name.as_str(), args.as_slice()) {
            ("j_plus", &[i, j]) => TermHandle::JPlus(i, j),
            ("j_minus", &[i, j]) => TermHandle::JMinus(i, j),
            ("j_z", &[i, j]) => TermHandle::Jz(i, j),
            ("heis", &[i, j]) => TermHandle::Heis(i, j),
            ("field_x", &[i]) => TermHandle::FieldX(i),
            ("epsilon", &[i]) => TermHandle::Epsilon(i),
            ("global_z", &[]) => TermHandle::GlobalZ,
            ("free" | "free_evolution", &[]) => TermHandle::Free,
            _ => return Err(bad()),
        })
    }
}

impl Serialize for TermHandle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TermHandle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A background term singled out for ideal-mode free evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BackgroundTerm {
    /// `ε_m⁻ T_m^z` of logical qubit `m` (1-based).
    EpsMinus(usize),
    /// `ε_m⁺ R_m^z` of logical qubit `m` (1-based).
    EpsPlus(usize),
    /// `J^z_ij σ_i^z σ_j^z` at the model's fixed value.
    Zz(usize, usize),
}

impl fmt::Display for BackgroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackgroundTerm::EpsMinus(m) => write!(f, "eps_minus({m})"),
            BackgroundTerm::EpsPlus(m) => write!(f, "eps_plus({m})"),
            BackgroundTerm::Zz(i, j) => write!(f, "zz({i},{j})"),
        }
    }
}

impl FromStr for BackgroundTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = parse_call(s)?;
        Ok(match (name.as_str(), args.as_slice()) {
            ("eps_minus", &[m]) => BackgroundTerm::EpsMinus(m),
            ("eps_plus", &[m]) => BackgroundTerm::EpsPlus(m),
            ("zz", &[i, j]) => BackgroundTerm::Zz(i, j),
            _ => return Err(Error::Parse(format!("unknown background term `{s}`"))),
        })
    }
}

impl Serialize for BackgroundTerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BackgroundTerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `T_ij^x = ½(σ_i^x σ_j^x + σ_i^y σ_j^y)`
pub fn build_t(i: usize, j: usize, n: usize) -> Result<PauliSum> {
    check_pair(i, j, n)?;
    let xx = PauliSum::term(n, &[(i, Pauli::X), (j, Pauli::X)], 0.5)?;
    let yy = PauliSum::term(n, &[(i, Pauli::Y), (j, Pauli::Y)], 0.5)?;
    xx.try_add(&yy)
}

/// `R_ij^x = ½(σ_i^x σ_j^x − σ_i^y σ_j^y)`
pub fn build_r(i: usize, j: usize, n: usize) -> Result<PauliSum> {
    check_pair(i, j, n)?;
    let xx = PauliSum::term(n, &[(i, Pauli::X), (j, Pauli::X)], 0.5)?;
    let yy = PauliSum::term(n, &[(i, Pauli::Y), (j, Pauli::Y)], -0.5)?;
    xx.try_add(&yy)
}

/// `σ_i^z σ_j^z`
pub fn build_zz(i: usize, j: usize, n: usize) -> Result<PauliSum> {
    check_pair(i, j, n)?;
    PauliSum::term(n, &[(i, Pauli::Z), (j, Pauli::Z)], 1.0)
}

/// `H₀ = Σ_i ½ ε_i σ_i^z`
pub fn build_h0(epsilon: &[f64]) -> Result<PauliSum> {
    let n = epsilon.len();
    let mut h = PauliSum::zero(n);
    for (k, &e) in epsilon.iter().enumerate() {
        h = h.try_add(&PauliSum::term(n, &[(k + 1, Pauli::Z)], 0.5 * e)?)?;
    }
    Ok(h)
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<()> {
    if i == 0 || i >= j || j > n {
        Err(Error::IndexOutOfRange(format!("pair ({i},{j}) with n = {n}")))
    } else {
        Ok(())
    }
}

fn check_spin(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        Err(Error::IndexOutOfRange(format!("spin {i} with n = {n}")))
    } else {
        Ok(())
    }
}

/// One coupling term of Eq.-(1) form on `n` spins.
fn coupling_sum(c: &Coupling, n: usize, plus: bool, minus: bool, zz: bool) -> Result<PauliSum> {
    let mut h = PauliSum::zero(n);
    if plus && c.j_plus() != 0.0 {
        h = h.try_add(&build_t(c.i, c.j, n)?.scale_real(c.j_plus()))?;
    }
    if minus && c.j_minus() != 0.0 {
        h = h.try_add(&build_r(c.i, c.j, n)?.scale_real(c.j_minus()))?;
    }
    if zz && c.jz != 0.0 {
        h = h.try_add(&build_zz(c.i, c.j, n)?.scale_real(c.jz))?;
    }
    Ok(h)
}

/// A validated exchange model: energies, couplings and the controllable set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeModel {
    kind: ModelKind,
    n_spins: usize,
    epsilon: Vec<f64>,
    couplings: Vec<Coupling>,
    controllable: BTreeSet<TermHandle>,
}

impl ExchangeModel {
    pub fn new(
        kind: ModelKind,
        n_spins: usize,
        epsilon: Vec<f64>,
        couplings: Vec<Coupling>,
        controllable: impl IntoIterator<Item = TermHandle>,
    ) -> Result<Self> {
        let model = ExchangeModel {
            kind,
            n_spins,
            epsilon,
            couplings,
            controllable: controllable.into_iter().filter(|h| *h != TermHandle::Free).collect(),
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_spins;
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Validation(format!("n_spins must be even and positive, got {n}")));
        }
        if self.epsilon.len() != n {
            return Err(Error::Dimension { expected: n, found: self.epsilon.len() });
        }
        let mut seen = BTreeSet::new();
        for c in &self.couplings {
            check_pair(c.i, c.j, n)?;
            if !seen.insert((c.i, c.j)) {
                return Err(Error::Validation(format!("duplicate coupling ({},{})", c.i, c.j)));
            }
            self.kind.check_coupling(c)?;
        }
        for h in &self.controllable {
            if !h.allowed_for(self.kind) {
                return Err(Error::Validation(format!(
                    "handle `{h}` does not exist in the {} family",
                    self.kind.name()
                )));
            }
            if let Some((i, j)) = h.pair() {
                check_pair(i, j, n)?;
                if self.coupling(i, j).is_none() {
                    return Err(Error::Validation(format!("handle `{h}` refers to an uncoupled pair")));
                }
            }
            if let TermHandle::FieldX(i) | TermHandle::Epsilon(i) = h {
                check_spin(*i, n)?;
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn n_logical(&self) -> usize {
        self.n_spins / 2
    }

    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn controllable(&self) -> &BTreeSet<TermHandle> {
        &self.controllable
    }

    pub fn coupling(&self, i: usize, j: usize) -> Option<&Coupling> {
        let (i, j) = (i.min(j), i.max(j));
        self.couplings.iter().find(|c| c.i == i && c.j == j)
    }

    pub fn is_controllable(&self, h: TermHandle) -> bool {
        h == TermHandle::Free || self.controllable.contains(&h)
    }

    pub fn require(&self, h: TermHandle) -> Result<()> {
        if self.is_controllable(h) {
            Ok(())
        } else {
            Err(Error::NotControllable(h.to_string()))
        }
    }

    /// `ε_m⁻ = (ε_{2m−1} − ε_{2m}) / 2`, `m` 1-based.
    pub fn eps_minus(&self, m: usize) -> Result<f64> {
        let (a, b) = self.pair_energies(m)?;
        Ok((a - b) / 2.0)
    }

    /// `ε_m⁺ = (ε_{2m−1} + ε_{2m}) / 2`, `m` 1-based.
    pub fn eps_plus(&self, m: usize) -> Result<f64> {
        let (a, b) = self.pair_energies(m)?;
        Ok((a + b) / 2.0)
    }

    fn pair_energies(&self, m: usize) -> Result<(f64, f64)> {
        if m == 0 || m > self.n_logical() {
            return Err(Error::IndexOutOfRange(format!("logical qubit {m}")));
        }
        Ok((self.epsilon[2 * m - 2], self.epsilon[2 * m - 1]))
    }

    /// The full exchange Hamiltonian over all couplings.
    pub fn build_exchange(&self) -> Result<PauliSum> {
        let mut h = PauliSum::zero(self.n_spins);
        for c in &self.couplings {
            h = h.try_add(&coupling_sum(c, self.n_spins, true, true, true)?)?;
        }
        Ok(h)
    }

    pub fn build_h0(&self) -> Result<PauliSum> {
        build_h0(&self.epsilon)
    }

    /// `H₀ + H_ex` with every coupling on.
    pub fn build_total(&self) -> Result<PauliSum> {
        self.build_h0()?.try_add(&self.build_exchange()?)
    }

    /// Everything that evolves while no control is applied: `H₀` plus the
    /// parts of each coupling that cannot be switched off.
    pub fn background(&self) -> Result<PauliSum> {
        let n = self.n_spins;
        let mut h = self.build_h0()?;
        for c in &self.couplings {
            let (i, j) = (c.i, c.j);
            if self.controllable.contains(&TermHandle::Heis(i, j)) {
                continue;
            }
            let plus = !self.controllable.contains(&TermHandle::JPlus(i, j));
            let minus = !self.controllable.contains(&TermHandle::JMinus(i, j));
            let zz = !self.controllable.contains(&TermHandle::Jz(i, j));
            h = h.try_add(&coupling_sum(c, n, plus, minus, zz)?)?;
        }
        Ok(h)
    }

    /// Scale used to turn a pulse-to-background ratio into a strength.
    pub fn background_magnitude(&self) -> Result<f64> {
        let m = self.background()?.max_non_identity_magnitude();
        Ok(if m > 0.0 { m } else { 1.0 })
    }

    /// Sum of the chosen background terms at their fixed values.
    pub fn focused_background(&self, focus: &[BackgroundTerm]) -> Result<PauliSum> {
        let n = self.n_spins;
        let mut h = PauliSum::zero(n);
        for term in focus {
            let part = match *term {
                BackgroundTerm::EpsMinus(m) => crate::encoding::t_z(m, n)?.scale_real(self.eps_minus(m)?),
                BackgroundTerm::EpsPlus(m) => crate::encoding::r_z(m, n)?.scale_real(self.eps_plus(m)?),
                BackgroundTerm::Zz(i, j) => {
                    let c = self
                        .coupling(i, j)
                        .ok_or_else(|| Error::Connectivity(format!("no coupling between spins {i} and {j}")))?;
                    build_zz(c.i, c.j, n)?.scale_real(c.jz)
                }
            };
            h = h.try_add(&part)?;
        }
        Ok(h)
    }

    /// Generator evolved while `handle` is pulsed at `strength`.
    ///
    /// `Free` returns the background and ignores `strength`.
    pub fn toggled_generator(&self, handle: TermHandle, strength: f64) -> Result<PauliSum> {
        self.require(handle)?;
        let n = self.n_spins;
        let g = match handle {
            TermHandle::JPlus(i, j) => build_t(i, j, n)?,
            TermHandle::JMinus(i, j) => build_r(i, j, n)?,
            TermHandle::Jz(i, j) => build_zz(i, j, n)?,
            TermHandle::Heis(i, j) => build_t(i, j, n)?.try_add(&build_zz(i, j, n)?.scale_real(0.5))?,
            TermHandle::FieldX(i) => PauliSum::term(n, &[(i, Pauli::X)], 1.0)?,
            TermHandle::Epsilon(i) => PauliSum::term(n, &[(i, Pauli::Z)], 0.5)?,
            TermHandle::GlobalZ => build_h0(&vec![1.0; n])?,
            TermHandle::Free => return self.background(),
        };
        Ok(g.scale_real(strength))
    }

    /// A two-spin NMR molecule, `Σ ε_i σ_i^z + J σ₁ᶻσ₂ᶻ`, with both
    /// transverse fields controllable. `eps` are the coefficients of `σ_i^z`.
    pub fn nmr_two_spin(eps: [f64; 2], j12: f64) -> Result<Self> {
        ExchangeModel::new(
            ModelKind::NmrIsing,
            2,
            vec![2.0 * eps[0], 2.0 * eps[1]],
            vec![Coupling::new(1, 2, 0.0, 0.0, j12)],
            [TermHandle::FieldX(1), TermHandle::FieldX(2)],
        )
    }
}

/// How the free Hamiltonian may be driven on a platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum H0Control {
    Fixed,
    Controllable,
}

/// One row of the platform comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub system: &'static str,
    pub kind: ModelKind,
    pub two_qubit: &'static str,
    pub h0: H0Control,
    pub external: &'static str,
}

pub const PRESETS: [Preset; 6] = [
    Preset {
        name: "spin_dots",
        system: "Spin-coupled quantum dots",
        kind: ModelKind::Heisenberg,
        two_qubit: "Heisenberg, controllable",
        h0: H0Control::Fixed,
        external: "hard",
    },
    Preset {
        name: "donor_atoms",
        system: "Donor atom nuclear/electron spins",
        kind: ModelKind::Heisenberg,
        two_qubit: "Heisenberg, controllable",
        h0: H0Control::Fixed,
        external: "hard",
    },
    Preset {
        name: "quantum_hall",
        system: "Quantum Hall",
        kind: ModelKind::Xy,
        two_qubit: "XY, controllable",
        h0: H0Control::Fixed,
        external: "hard",
    },
    Preset {
        name: "cavity",
        system: "Quantum dots/atoms in cavities",
        kind: ModelKind::Xy,
        two_qubit: "XY, controllable",
        h0: H0Control::Controllable,
        external: "easy, requires additional lasers",
    },
    Preset {
        name: "exciton_dots",
        system: "Exciton-coupled quantum dots",
        kind: ModelKind::Xy,
        two_qubit: "XY, controllable",
        h0: H0Control::Fixed,
        external: "hard",
    },
    Preset {
        name: "electrons_on_helium",
        system: "Electrons on helium",
        kind: ModelKind::XxzSymmetric,
        two_qubit: "XXZ, only J+ controllable",
        h0: H0Control::Controllable,
        external: "easy but slow and hard to tune",
    },
];

pub fn find_preset(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| Error::Parse(format!("unknown preset `{name}`")))
}

/// Default non-degenerate spectrum: `ε_m⁻ = 0.25`, `ε_m⁺ = 1 + 0.2 m`.
pub fn default_epsilon(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| {
            let m = i.div_ceil(2);
            let centre = 1.0 + 0.2 * m as f64;
            if i % 2 == 1 {
                centre + 0.25
            } else {
                centre - 0.25
            }
        })
        .collect()
}

impl Preset {
    /// Instantiate the platform on `n` spins with default constants.
    ///
    /// Chains are nearest-neighbour; XY platforms also get next-nearest
    /// neighbour couplings.
    pub fn build(&self, n: usize) -> Result<ExchangeModel> {
        let mut couplings = Vec::new();
        let mut controllable = Vec::new();
        match self.kind {
            ModelKind::Heisenberg => {
                for i in 1..n {
                    couplings.push(Coupling::isotropic(i, i + 1, 0.5));
                    controllable.push(TermHandle::Heis(i, i + 1));
                }
            }
            ModelKind::Xy => {
                for i in 1..n {
                    for j in [i + 1, i + 2] {
                        if j <= n {
                            couplings.push(Coupling::new(i, j, 0.5, 0.5, 0.0));
                            controllable.push(TermHandle::JPlus(i, j));
                        }
                    }
                }
            }
            ModelKind::XxzSymmetric => {
                for i in 1..n {
                    couplings.push(Coupling::new(i, i + 1, 0.5, 0.5, 0.3));
                    controllable.push(TermHandle::JPlus(i, i + 1));
                }
            }
            ModelKind::XxzAntisymmetric | ModelKind::NmrIsing => {
                unreachable!("no platform preset for {}", self.kind.name())
            }
        }
        if self.h0 == H0Control::Controllable {
            controllable.push(TermHandle::GlobalZ);
        }
        ExchangeModel::new(self.kind, n, default_epsilon(n), couplings, controllable)
    }
}

/// An axially antisymmetric XXZ chain (`J^x = −J^y`) with `J⁻` control.
pub fn xxz_antisymmetric_chain(n: usize) -> Result<ExchangeModel> {
    let couplings = (1..n).map(|i| Coupling::new(i, i + 1, 0.5, -0.5, 0.3)).collect();
    let controllable = (1..n).map(|i| TermHandle::JMinus(i, i + 1));
    ExchangeModel::new(ModelKind::XxzAntisymmetric, n, default_epsilon(n), couplings, controllable)
}

/// On-disk model description.
///
/// Either a full description or `{"preset": name, "n_spins": n}` with
/// optional overrides of any field.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ModelKind>,
    pub n_spins: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<Vec<Coupling>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controllable: Option<Vec<TermHandle>>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<ExchangeModel> {
        let base = match &self.preset {
            Some(name) => Some(find_preset(name)?.build(self.n_spins)?),
            None if self.kind == Some(ModelKind::XxzAntisymmetric) && self.couplings.is_none() => {
                Some(xxz_antisymmetric_chain(self.n_spins)?)
            }
            None => None,
        };
        let kind = match (&base, self.kind) {
            (Some(b), Some(k)) if b.kind != k => {
                return Err(Error::Validation(format!("preset is {} but kind says {}", b.kind.name(), k.name())))
            }
            (Some(b), _) => b.kind,
            (None, Some(k)) => k,
            (None, None) => return Err(Error::Validation("model needs `kind` or `preset`".into())),
        };
        let epsilon = self
            .epsilon
            .or_else(|| base.as_ref().map(|b| b.epsilon.clone()))
            .unwrap_or_else(|| default_epsilon(self.n_spins));
        let couplings = self.couplings.or_else(|| base.as_ref().map(|b| b.couplings.clone())).unwrap_or_default();
        let controllable = self
            .controllable
            .or_else(|| base.as_ref().map(|b| b.controllable.iter().copied().collect()))
            .unwrap_or_default();
        ExchangeModel::new(kind, self.n_spins, epsilon, couplings, controllable)
    }

    pub fn from_model(m: &ExchangeModel) -> Self {
        ModelFile {
            preset: None,
            kind: Some(m.kind),
            n_spins: m.n_spins,
            epsilon: Some(m.epsilon.clone()),
            couplings: Some(m.couplings.clone()),
            controllable: Some(m.controllable.iter().copied().collect()),
        }
    }
}

impl ExchangeModel {
    pub fn from_json(s: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_model()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from_model(self)).expect("model serializes")
    }
}
