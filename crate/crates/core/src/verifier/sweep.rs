//! Realistic-mode convergence sweeps over the pulse/background ratio.

use serde::Serialize;

use super::{verify_gate, EvalMode, Tolerances};
use crate::compiler::{CompileOptions, LogicalGate};
use crate::error::{Error, Result};
use crate::model::ExchangeModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub gate: String,
    /// `None` stands for the ideal limit.
    pub ratio: Option<f64>,
    pub fidelity: f64,
    pub leakage: f64,
}

/// Fidelity and leakage of `gate` at each ratio, in input order.
///
/// Points are evaluated on separate threads.
pub fn sweep(
    gate: &LogicalGate,
    model: &ExchangeModel,
    ratios: &[Option<f64>],
    opts: CompileOptions,
) -> Result<Vec<SweepRow>> {
    for r in ratios.iter().flatten() {
        if *r <= 0.0 || !r.is_finite() {
            return Err(Error::Schedule(format!("ratio must be positive, got {r}")));
        }
    }
    let reports = std::thread::scope(|scope| {
        let handles: Vec<_> = ratios
            .iter()
            .map(|r| {
                let mode = match r {
                    Some(ratio) => EvalMode::Realistic { ratio: *ratio },
                    None => EvalMode::Ideal,
                };
                scope.spawn(move || verify_gate(gate, model, mode, opts, Tolerances::default()))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect::<Vec<_>>()
    });
    reports
        .into_iter()
        .zip(ratios)
        .map(|(rep, r)| match rep.reason {
            Some(reason) => Err(Error::Schedule(reason)),
            None => Ok(SweepRow { gate: gate.to_string(), ratio: *r, fidelity: rep.fidelity, leakage: rep.leakage }),
        })
        .collect()
}
