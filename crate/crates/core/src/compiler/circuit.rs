//! Circuit files: a JSON list of gates with 0-based logical targets.

use serde::{Deserialize, Serialize};

use super::LogicalGate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGate {
    gate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    targets: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
}

impl RawGate {
    fn single(&self, index: usize) -> Result<usize> {
        match (self.target, self.targets.as_deref()) {
            (Some(q), None) | (None, Some(&[q])) => Ok(q + 1),
            _ => Err(gate_err(index, format!("`{}` takes exactly one target", self.gate))),
        }
    }

    fn adjacent(&self, index: usize) -> Result<usize> {
        let Some(&[a, b]) = self.targets.as_deref() else {
            return Err(gate_err(index, format!("`{}` takes `targets: [q, q+1]`", self.gate)));
        };
        if a.abs_diff(b) != 1 {
            return Err(Error::Gate {
                index,
                source: Box::new(Error::Connectivity(format!("logical qubits {a} and {b} are not adjacent"))),
            });
        }
        Ok(a.min(b) + 1)
    }

    fn field(&self, v: Option<f64>, name: &str, index: usize) -> Result<f64> {
        let x = v.ok_or_else(|| gate_err(index, format!("`{}` needs `{name}`", self.gate)))?;
        if !x.is_finite() {
            return Err(gate_err(index, format!("`{name}` must be finite")));
        }
        Ok(x)
    }

    fn into_gate(self, index: usize) -> Result<LogicalGate> {
        Ok(match self.gate.to_ascii_lowercase().as_str() {
            "rx" => LogicalGate::Rx { m: self.single(index)?, theta: self.field(self.angle, "angle", index)? },
            "rz" => LogicalGate::Rz { m: self.single(index)?, theta: self.field(self.angle, "angle", index)? },
            "euler" => LogicalGate::Euler {
                m: self.single(index)?,
                alpha: self.field(self.alpha, "alpha", index)?,
                beta: self.field(self.beta, "beta", index)?,
                gamma: self.field(self.gamma, "gamma", index)?,
            },
            "cphase" => LogicalGate::Cphase { m: self.adjacent(index)? },
            "heis_zz" => LogicalGate::HeisZz { m: self.adjacent(index)?, t: self.field(self.t, "t", index)? },
            other => return Err(gate_err(index, format!("unknown gate `{other}`"))),
        })
    }

    fn from_gate(g: &LogicalGate) -> Self {
        let mut raw = RawGate { gate: g.name().to_string(), ..RawGate::default() };
        match *g {
            LogicalGate::Rx { m, theta } | LogicalGate::Rz { m, theta } => {
                raw.target = Some(m - 1);
                raw.angle = Some(theta);
            }
            LogicalGate::Euler { m, alpha, beta, gamma } => {
                raw.target = Some(m - 1);
                raw.alpha = Some(alpha);
                raw.beta = Some(beta);
                raw.gamma = Some(gamma);
            }
            LogicalGate::Cphase { m } => raw.targets = Some(vec![m - 1, m]),
            LogicalGate::HeisZz { m, t } => {
                raw.targets = Some(vec![m - 1, m]);
                raw.t = Some(t);
            }
        }
        raw
    }
}

fn gate_err(index: usize, msg: String) -> Error {
    Error::Gate { index, source: Box::new(Error::Parse(msg)) }
}

pub fn circuit_from_json(s: &str) -> Result<Vec<LogicalGate>> {
    let raw: Vec<RawGate> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    raw.into_iter().enumerate().map(|(i, g)| g.into_gate(i)).collect()
}

pub fn circuit_to_json(gates: &[LogicalGate]) -> String {
    let raw: Vec<RawGate> = gates.iter().map(RawGate::from_gate).collect();
    serde_json::to_string_pretty(&raw).expect("circuit serializes")
}
