//! Step accounting per gate and model.

use std::f64::consts::PI;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::compiler::{compile_gate, xzx_angles, CompileOptions, LogicalGate};
use crate::error::Result;
use crate::model::{find_preset, xxz_antisymmetric_chain, ExchangeModel, ModelKind};
use crate::pauli::CMatrix;

/// Serial steps for a selective σᶻσᶻ between three isotropic qubits, as
/// reported in the literature.
pub const LITERATURE_SERIAL: usize = 19;
/// The same in parallel mode on a 2D layout.
pub const LITERATURE_PARALLEL_2D: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedCount {
    Exactly(usize),
    AtMost(usize),
}

impl ExpectedCount {
    pub fn admits(self, n: usize) -> bool {
        match self {
            ExpectedCount::Exactly(k) => n == k,
            ExpectedCount::AtMost(k) => n <= k,
        }
    }
}

impl fmt::Display for ExpectedCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectedCount::Exactly(k) => write!(f, "{k}"),
            ExpectedCount::AtMost(k) => write!(f, "<={k}"),
        }
    }
}

impl Serialize for ExpectedCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Measured versus expected step count of one construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostRow {
    pub model: String,
    pub gate: String,
    /// `serial` or `parallel`: which count is compared.
    pub counting: &'static str,
    pub steps_serial: usize,
    pub steps_parallel: usize,
    pub expected: ExpectedCount,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literature_serial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literature_parallel_2d: Option<usize>,
}

fn hadamard() -> CMatrix {
    let h = num_complex::Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

struct Case {
    gate: LogicalGate,
    label: &'static str,
    parallel: bool,
    expected: ExpectedCount,
    literature: bool,
}

fn cases(kind: ModelKind) -> Vec<Case> {
    let (a, b, g) = xzx_angles(&hadamard()).expect("Hadamard is unitary");
    let single = |gate, label, expected| Case { gate, label, parallel: true, expected, literature: false };
    let mut out = vec![
        single(LogicalGate::Rx { m: 1, theta: PI / 3.0 }, "rx", ExpectedCount::Exactly(1)),
        single(LogicalGate::Rz { m: 1, theta: PI / 3.0 }, "rz", ExpectedCount::Exactly(4)),
        single(LogicalGate::Euler { m: 1, alpha: a, beta: b, gamma: g }, "euler", ExpectedCount::AtMost(6)),
    ];
    match kind {
        ModelKind::XxzSymmetric | ModelKind::XxzAntisymmetric => {
            out.push(single(LogicalGate::Cphase { m: 1 }, "cphase (parallel)", ExpectedCount::Exactly(4)));
            out.push(Case {
                gate: LogicalGate::Cphase { m: 1 },
                label: "cphase (serial)",
                parallel: false,
                expected: ExpectedCount::Exactly(6),
                literature: false,
            });
        }
        ModelKind::Xy => out.push(single(LogicalGate::Cphase { m: 1 }, "cphase", ExpectedCount::Exactly(5))),
        ModelKind::Heisenberg => out.push(Case {
            gate: LogicalGate::HeisZz { m: 1, t: 1.0 },
            label: "heis_zz",
            parallel: true,
            expected: ExpectedCount::Exactly(6),
            literature: true,
        }),
        ModelKind::NmrIsing => out.clear(),
    }
    out
}

/// Step counts of every construction available for `model`.
pub fn cost_report(model: &ExchangeModel, name: &str) -> Result<Vec<CostRow>> {
    let mut rows = Vec::new();
    for case in cases(model.kind()) {
        let opts = CompileOptions { parallel: case.parallel, exact_cphase: false };
        let s = compile_gate(&case.gate, model, opts)?;
        let (serial, parallel) = (s.step_count_serial(), s.step_count_parallel());
        let measured = if case.parallel { parallel } else { serial };
        rows.push(CostRow {
            model: name.to_string(),
            gate: case.label.to_string(),
            counting: if case.parallel { "parallel" } else { "serial" },
            steps_serial: serial,
            steps_parallel: parallel,
            expected: case.expected,
            matches: case.expected.admits(measured),
            literature_serial: case.literature.then_some(LITERATURE_SERIAL),
            literature_parallel_2d: case.literature.then_some(LITERATURE_PARALLEL_2D),
        });
    }
    Ok(rows)
}

/// Cost rows for the XXZ, XY and Heisenberg reference platforms on 4 spins.
pub fn cost_table() -> Result<Vec<CostRow>> {
    let mut rows = Vec::new();
    for name in ["electrons_on_helium", "quantum_hall", "spin_dots"] {
        rows.extend(cost_report(&find_preset(name)?.build(4)?, name)?);
    }
    rows.extend(cost_report(&xxz_antisymmetric_chain(4)?, "xxz_antisymmetric")?);
    Ok(rows)
}
