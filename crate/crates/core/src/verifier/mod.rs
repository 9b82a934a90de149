//! Fidelity, leakage and step-count verdicts for compiled schedules.

mod cost;
mod identities;
mod sweep;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compiler::{circuit_target, compile_circuit, compile_gate, target_unitary, CompileOptions, LogicalGate};
use crate::encoding::CodeSpec;
use crate::error::{Error, Result};
use crate::evolution::{apply_schedule, restrict, PulseSchedule};
use crate::model::ExchangeModel;
use crate::pauli::{CMatrix, DenseOperator};

pub use cost::{cost_report, cost_table, CostRow, ExpectedCount, LITERATURE_PARALLEL_2D, LITERATURE_SERIAL};
pub use identities::{identity_suite, IdentityCheck, Role};
pub use sweep::{sweep, SweepRow};

/// How a schedule is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EvalMode {
    /// Steps evolve exactly as written.
    #[default]
    Ideal,
    /// Pulses at `ratio × max background` with the background always on.
    Realistic { ratio: f64 },
}

impl EvalMode {
    pub fn ratio(&self) -> Option<f64> {
        match self {
            EvalMode::Ideal => None,
            EvalMode::Realistic { ratio } => Some(*ratio),
        }
    }
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalMode::Ideal => f.write_str("ideal"),
            EvalMode::Realistic { ratio } => write!(f, "realistic({ratio})"),
        }
    }
}

/// Pass thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub fidelity: f64,
    pub leakage: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { fidelity: 1e-8, leakage: 1e-8 }
    }
}

/// Outcome of compiling, simulating and comparing one gate or circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub gate: String,
    pub fidelity: f64,
    pub leakage: f64,
    pub step_count_serial: usize,
    pub step_count_parallel: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl VerificationReport {
    fn failed(gate: String, mode: EvalMode, err: &Error) -> Self {
        VerificationReport {
            gate,
            fidelity: 0.0,
            leakage: 0.0,
            step_count_serial: 0,
            step_count_parallel: 0,
            mode: mode.to_string(),
            ratio: mode.ratio(),
            pass: false,
            reason: Some(err.to_string()),
        }
    }
}

/// Code the model computes in.
pub fn code_for(model: &ExchangeModel) -> Result<CodeSpec> {
    let sector = model
        .kind()
        .sector()
        .ok_or_else(|| Error::UnsupportedGate(format!("{} models carry no code", model.kind().name())))?;
    CodeSpec::new(sector, model.n_spins())
}

/// `|Tr(U_target† V†UV)| / 2^{n_logical}`.
pub fn fidelity(u: &DenseOperator, target: &CMatrix, code: &CodeSpec) -> Result<f64> {
    let d = code.logical_dim();
    if target.shape() != (d, d) {
        return Err(Error::Dimension { expected: d, found: target.nrows() });
    }
    let b = code.compress(u)?;
    Ok((target.adjoint() * b).trace().norm() / d as f64)
}

/// The unitary a schedule realizes under `mode`.
pub fn simulate(s: &PulseSchedule, model: &ExchangeModel, mode: EvalMode) -> Result<DenseOperator> {
    match mode {
        EvalMode::Ideal => apply_schedule(s, model),
        EvalMode::Realistic { ratio } => apply_schedule(&s.realize(model, ratio)?, model),
    }
}

/// Simulate `s` and compare it with `target`.
pub fn verify_schedule(
    label: impl Into<String>,
    s: &PulseSchedule,
    target: &CMatrix,
    model: &ExchangeModel,
    mode: EvalMode,
    tol: Tolerances,
) -> Result<VerificationReport> {
    let code = code_for(model)?;
    let u = simulate(s, model, mode)?;
    let r = restrict(&u, &code)?;
    let d = code.logical_dim() as f64;
    let fid = (target.adjoint() * &r.logical).trace().norm() / d;
    Ok(VerificationReport {
        gate: label.into(),
        fidelity: fid,
        leakage: r.leakage,
        step_count_serial: s.step_count_serial(),
        step_count_parallel: s.step_count_parallel(),
        mode: mode.to_string(),
        ratio: mode.ratio(),
        pass: fid >= 1.0 - tol.fidelity && r.leakage <= tol.leakage,
        reason: None,
    })
}

/// Compile one gate and verify it; failures become a report with a reason.
pub fn verify_gate(
    g: &LogicalGate,
    model: &ExchangeModel,
    mode: EvalMode,
    opts: CompileOptions,
    tol: Tolerances,
) -> VerificationReport {
    let run = || -> Result<VerificationReport> {
        let s = compile_gate(g, model, opts)?;
        let target = target_unitary(g, model, opts)?;
        verify_schedule(g.to_string(), &s, &target, model, mode, tol)
    };
    run().unwrap_or_else(|e| VerificationReport::failed(g.to_string(), mode, &e))
}

/// Report label for a whole circuit.
pub fn circuit_label(gates: &[LogicalGate]) -> String {
    match gates.len() {
        0 => "circuit (empty)".to_string(),
        1 => "circuit (1 gate)".to_string(),
        n => format!("circuit ({n} gates)"),
    }
}

/// Verify a whole circuit as one unitary.
pub fn verify_circuit(
    gates: &[LogicalGate],
    model: &ExchangeModel,
    mode: EvalMode,
    opts: CompileOptions,
    tol: Tolerances,
) -> VerificationReport {
    let label = circuit_label(gates);
    let run = || -> Result<VerificationReport> {
        let s = compile_circuit(gates, model, opts)?;
        let target = circuit_target(gates, model, opts)?;
        verify_schedule(label.clone(), &s, &target, model, mode, tol)
    };
    run().unwrap_or_else(|e| VerificationReport::failed(label.clone(), mode, &e))
}

/// Leakage of `u` out of the code of the opposite sector.
pub fn cross_sector_leakage(u: &DenseOperator, code: &CodeSpec) -> Result<f64> {
    CodeSpec::new(code.sector().other(), code.n_spins())?.leakage(u)
}
