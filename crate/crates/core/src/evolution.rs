//! Exact propagators and pulse-schedule simulation.
//!
//! A pulse of handle `h` with strength `s` and duration `τ` applies
//! `exp(−i·s·τ·G_h)`. Schedules are stored in time order: `groups[0]` acts
//! first, so the realized unitary is `U_last ⋯ U_1 U_0`.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encoding::CodeSpec;
use crate::error::{Error, Result};
use crate::model::{BackgroundTerm, ExchangeModel, TermHandle};
use crate::pauli::{check_capacity, CMatrix, DenseOperator, Pauli, PauliSum};

const HERMITIAN_TOL: f64 = 1e-12;

/// `exp(−i·h·t)` by Hermitian eigendecomposition.
pub fn propagator(h: &PauliSum, t: f64, n: usize) -> Result<DenseOperator> {
    if h.n_spins() != n {
        return Err(Error::Dimension { expected: n, found: h.n_spins() });
    }
    check_capacity(n)?;
    let scale = h.terms().map(|(_, c)| c.norm()).fold(1.0, f64::max);
    let imag = h.max_imaginary();
    if imag > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(imag));
    }
    if h.terms().all(|(l, _)| l.iter().all(|p| matches!(p, Pauli::I | Pauli::Z))) {
        return Ok(diagonal_propagator(h, t, n));
    }
    let m = h.to_matrix()?.into_matrix();
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = m.symmetric_eigen();
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * t));
    let q = &eig.eigenvectors;
    let mut qd = q.clone();
    for (j, ph) in phases.iter().enumerate() {
        let mut col = qd.column_mut(j);
        col *= *ph;
    }
    DenseOperator::new(n, qd * q.adjoint())
}

fn diagonal_propagator(h: &PauliSum, t: f64, n: usize) -> DenseOperator {
    let dim = 1usize << n;
    let mut energies = vec![0.0; dim];
    for (letters, c) in h.terms() {
        let zmask =
            letters.iter().enumerate().filter(|(_, p)| **p == Pauli::Z).fold(0usize, |acc, (k, _)| acc | (1 << k));
        for (b, e) in energies.iter_mut().enumerate() {
            let sign = if (b & zmask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            *e += sign * c.re;
        }
    }
    let diag = DVector::from_iterator(dim, energies.iter().map(|e| Complex64::from_polar(1.0, -e * t)));
    DenseOperator::new(n, CMatrix::from_diagonal(&diag)).expect("dimension matches")
}

/// Whether the always-on background evolves during a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseMode {
    #[default]
    Ideal,
    Realistic,
}

/// One control action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep", into = "RawStep")]
pub struct PulseStep {
    handle: TermHandle,
    strength: f64,
    duration: f64,
    mode: PulseMode,
    focus: Vec<BackgroundTerm>,
}

impl PulseStep {
    /// A pulse of `handle` rotating by `angle` at unit strength.
    pub fn pulse(handle: TermHandle, angle: f64) -> Self {
        PulseStep {
            handle,
            strength: if angle < 0.0 { -1.0 } else { 1.0 },
            duration: angle.abs(),
            mode: PulseMode::Ideal,
            focus: Vec::new(),
        }
    }

    /// Free evolution for `duration`; in ideal mode only `focus` evolves
    /// (the whole background when `focus` is empty).
    pub fn free(duration: f64, focus: Vec<BackgroundTerm>) -> Self {
        PulseStep { handle: TermHandle::Free, strength: 1.0, duration, mode: PulseMode::Ideal, focus }
    }

    pub fn with_strength(handle: TermHandle, strength: f64, duration: f64) -> Result<Self> {
        if duration < 0.0 || !duration.is_finite() || !strength.is_finite() {
            return Err(Error::Schedule(format!(
                "`{handle}`: duration must be finite and nonnegative, got {duration}"
            )));
        }
        Ok(PulseStep { handle, strength, duration, mode: PulseMode::Ideal, focus: Vec::new() })
    }

    pub fn with_mode(mut self, mode: PulseMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn handle(&self) -> TermHandle {
        self.handle
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn angle(&self) -> f64 {
        if self.handle == TermHandle::Free {
            self.duration
        } else {
            self.strength * self.duration
        }
    }

    pub fn mode(&self) -> PulseMode {
        self.mode
    }

    pub fn focus(&self) -> &[BackgroundTerm] {
        &self.focus
    }

    pub fn is_free(&self) -> bool {
        self.handle == TermHandle::Free
    }

    /// Generator evolved on top of the background while this step is on.
    fn control(&self, model: &ExchangeModel) -> Result<PauliSum> {
        match (self.handle, self.mode) {
            (TermHandle::Free, PulseMode::Realistic) => Ok(PauliSum::zero(model.n_spins())),
            (TermHandle::Free, PulseMode::Ideal) if self.focus.is_empty() => model.background(),
            (TermHandle::Free, PulseMode::Ideal) => model.focused_background(&self.focus),
            (h, _) => model.toggled_generator(h, self.strength),
        }
    }

    fn spins(&self, n: usize) -> Vec<usize> {
        match self.handle.support() {
            Some(s) => s,
            None => (1..=n).collect(),
        }
    }
}

impl fmt::Display for PulseStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_free() {
            write!(f, "free τ={:.6}", self.duration)?;
            if !self.focus.is_empty() {
                let names: Vec<_> = self.focus.iter().map(|t| t.to_string()).collect();
                write!(f, " [{}]", names.join(", "))?;
            }
            Ok(())
        } else {
            write!(f, "{} θ={:.6}", self.handle, self.angle())
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    handle: TermHandle,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    strength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    duration: Option<f64>,
    #[serde(default)]
    mode: PulseMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    focus: Vec<BackgroundTerm>,
}

impl TryFrom<RawStep> for PulseStep {
    type Error = Error;

    fn try_from(r: RawStep) -> Result<Self> {
        let mut step = match (r.handle, r.angle, r.strength, r.duration) {
            (TermHandle::Free, _, _, Some(d)) => PulseStep::with_strength(TermHandle::Free, 1.0, d)?,
            (TermHandle::Free, Some(a), None, None) => PulseStep::with_strength(TermHandle::Free, 1.0, a)?,
            (h, None, Some(s), Some(d)) => PulseStep::with_strength(h, s, d)?,
            (h, Some(a), None, None) => PulseStep::pulse(h, a),
            (h, Some(a), Some(s), Some(d)) => {
                if (s * d - a).abs() > 1e-9 * a.abs().max(1.0) {
                    return Err(Error::Schedule(format!(
                        "`{h}`: angle {a} disagrees with strength × duration = {}",
                        s * d
                    )));
                }
                PulseStep::with_strength(h, s, d)?
            }
            (h, ..) => {
                return Err(Error::Schedule(format!("`{h}`: give either `angle` or both `strength` and `duration`")))
            }
        };
        if !r.focus.is_empty() && r.handle != TermHandle::Free {
            return Err(Error::Schedule(format!("`{}`: only free steps take a focus", r.handle)));
        }
        step.mode = r.mode;
        step.focus = r.focus;
        Ok(step)
    }
}

impl From<PulseStep> for RawStep {
    fn from(s: PulseStep) -> Self {
        let angle = if s.is_free() { None } else { Some(s.angle()) };
        RawStep {
            handle: s.handle,
            angle,
            strength: if s.is_free() { None } else { Some(s.strength) },
            duration: Some(s.duration),
            mode: s.mode,
            focus: s.focus,
        }
    }
}

/// Steps applied simultaneously on disjoint spins.
pub type PulseGroup = Vec<PulseStep>;

/// Time-ordered parallel groups of pulses.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    groups: Vec<PulseGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<String>,
}

impl PulseSchedule {
    pub fn new() -> Self {
        PulseSchedule::default()
    }

    /// Empty groups are dropped.
    pub fn from_groups(groups: Vec<PulseGroup>) -> Self {
        PulseSchedule { groups: groups.into_iter().filter(|g| !g.is_empty()).collect(), target: None }
    }

    pub fn with_target(mut self, target: impl Into<String>) -> Self {
        self.target = Some(target.into());
        self
    }

    pub fn target(&self) -> Option<&str> {
        self.target.as_deref()
    }

    pub fn groups(&self) -> &[PulseGroup] {
        &self.groups
    }

    pub fn push_step(&mut self, step: PulseStep) {
        self.groups.push(vec![step]);
    }

    pub fn push_group(&mut self, group: PulseGroup) {
        if !group.is_empty() {
            self.groups.push(group);
        }
    }

    pub fn append(&mut self, other: PulseSchedule) {
        self.groups.extend(other.groups);
    }

    pub fn steps(&self) -> impl Iterator<Item = &PulseStep> {
        self.groups.iter().flatten()
    }

    pub fn step_count_serial(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn step_count_parallel(&self) -> usize {
        self.groups.len()
    }

    /// Total wall-clock time.
    pub fn duration(&self) -> f64 {
        self.groups.iter().map(|g| g.iter().map(|s| s.duration).fold(0.0, f64::max)).sum()
    }

    /// Realistic version of the schedule: every control pulse runs at
    /// `ratio × max background magnitude` with the background on, and free
    /// steps evolve the full background.
    pub fn realize(&self, model: &ExchangeModel, ratio: f64) -> Result<PulseSchedule> {
        if ratio <= 0.0 || !ratio.is_finite() {
            return Err(Error::Schedule(format!("ratio must be positive and finite, got {ratio}")));
        }
        let strength = ratio * model.background_magnitude()?;
        let groups = self
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|s| {
                        if s.is_free() {
                            PulseStep { focus: Vec::new(), ..s.clone() }.with_mode(PulseMode::Realistic)
                        } else {
                            let a = s.angle();
                            PulseStep {
                                handle: s.handle,
                                strength: strength.copysign(a),
                                duration: a.abs() / strength,
                                mode: PulseMode::Realistic,
                                focus: Vec::new(),
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(PulseSchedule { groups, target: self.target.clone() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sched: PulseSchedule = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(PulseSchedule::from_groups(sched.groups).with_target_opt(sched.target))
    }

    fn with_target_opt(mut self, target: Option<String>) -> Self {
        self.target = target;
        self
    }
}

fn check_group(group: &PulseGroup, n: usize) -> Result<()> {
    let mut used = BTreeSet::new();
    for step in group {
        for s in step.spins(n) {
            if s == 0 || s > n {
                return Err(Error::IndexOutOfRange(format!("`{}` on {n} spins", step.handle)));
            }
            if !used.insert(s) {
                return Err(Error::Schedule(format!("steps in one group overlap on spin {s} (`{}`)", step.handle)));
            }
        }
    }
    Ok(())
}

/// Unitary of one parallel group. Steps of different durations are
/// evolved piecewise; the background runs while any realistic step is on.
pub fn group_propagator(group: &PulseGroup, model: &ExchangeModel) -> Result<DenseOperator> {
    let n = model.n_spins();
    check_group(group, n)?;
    let controls = group.iter().map(|s| s.control(model)).collect::<Result<Vec<_>>>()?;
    let mut cuts: Vec<f64> = group.iter().map(|s| s.duration).filter(|d| *d > 0.0).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let background =
        if group.iter().any(|s| s.mode == PulseMode::Realistic) { Some(model.background()?) } else { None };
    let mut u = DenseOperator::identity(n);
    let mut start = 0.0;
    for end in cuts {
        let mut h = PauliSum::zero(n);
        let mut realistic = false;
        for (s, c) in group.iter().zip(&controls) {
            if s.duration > start {
                h = h.try_add(c)?;
                realistic |= s.mode == PulseMode::Realistic;
            }
        }
        if realistic {
            h = h.try_add(background.as_ref().expect("computed for realistic groups"))?;
        }
        let seg = propagator(&h, end - start, n)?;
        u = seg.compose(&u)?;
        start = end;
    }
    Ok(u)
}

/// Unitary realized by the whole schedule.
pub fn apply_schedule(s: &PulseSchedule, model: &ExchangeModel) -> Result<DenseOperator> {
    let mut u = DenseOperator::identity(model.n_spins());
    for group in &s.groups {
        u = group_propagator(group, model)?.compose(&u)?;
    }
    Ok(u)
}

/// Logical block `V†UV` and leakage `‖(I−P)UP‖_F / ‖P‖_F`.
#[derive(Debug, Clone, PartialEq)]
pub struct Restricted {
    pub logical: CMatrix,
    pub leakage: f64,
}

pub fn restrict(u: &DenseOperator, code: &CodeSpec) -> Result<Restricted> {
    Ok(Restricted { logical: code.compress(u)?, leakage: code.leakage(u)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Coupling, ModelKind};

    fn xy2() -> ExchangeModel {
        ExchangeModel::new(
            ModelKind::Xy,
            2,
            vec![1.3, 0.7],
            vec![Coupling::new(1, 2, 0.5, 0.5, 0.0)],
            [TermHandle::JPlus(1, 2)],
        )
        .unwrap()
    }

    #[test]
    fn zero_generator_gives_identity() {
        let u = propagator(&PauliSum::zero(3), 2.0, 3).unwrap();
        assert_eq!(u, DenseOperator::identity(3));
    }

    #[test]
    fn sigma_z_for_pi_is_minus_identity() {
        let z = PauliSum::term(1, &[(1, Pauli::Z)], 1.0).unwrap();
        let u = propagator(&z, std::f64::consts::PI, 1).unwrap();
        let minus = DenseOperator::identity(1).scale(Complex64::new(-1.0, 0.0));
        assert!(u.distance(&minus) < 1e-15);
    }

    #[test]
    fn dense_and_diagonal_paths_agree() {
        let h = PauliSum::term(2, &[(1, Pauli::Z), (2, Pauli::Z)], 0.7).unwrap()
            + PauliSum::term(2, &[(2, Pauli::Z)], -0.4).unwrap();
        let fast = propagator(&h, 1.3, 2).unwrap();
        let x = PauliSum::term(2, &[(1, Pauli::X)], 1e-300).unwrap();
        let slow = propagator(&(h + x), 1.3, 2).unwrap();
        assert!(fast.distance(&slow) < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = PauliSum::term(1, &[(1, Pauli::X)], 1.0).unwrap().scale(Complex64::new(0.0, 1.0));
        assert!(matches!(propagator(&h, 1.0, 1), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn empty_schedule_is_identity() {
        let u = apply_schedule(&PulseSchedule::new(), &xy2()).unwrap();
        assert_eq!(u, DenseOperator::identity(2));
    }

    #[test]
    fn json_round_trip() {
        let mut s = PulseSchedule::new();
        s.push_step(PulseStep::pulse(TermHandle::JPlus(1, 2), -0.5));
        s.push_step(PulseStep::free(0.25, vec![BackgroundTerm::EpsMinus(1)]));
        let back = PulseSchedule::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn angle_only_step_parses() {
        let s = PulseSchedule::from_json(r#"{"groups": [[{"handle":"j_plus(1,2)","angle":1.25,"mode":"ideal"}]]}"#)
            .unwrap();
        assert_eq!(s.step_count_serial(), 1);
        assert_eq!(s.groups()[0][0].angle(), 1.25);
    }

    #[test]
    fn inconsistent_angle_rejected() {
        let r = PulseSchedule::from_json(
            r#"{"groups": [[{"handle":"j_plus(1,2)","angle":1.0,"strength":2.0,"duration":1.0}]]}"#,
        );
        assert!(r.is_err());
    }

    #[test]
    fn overlapping_group_rejected() {
        let m = xy2();
        let g = vec![PulseStep::pulse(TermHandle::JPlus(1, 2), 0.1), PulseStep::pulse(TermHandle::JPlus(1, 2), 0.1)];
        assert!(matches!(group_propagator(&g, &m), Err(Error::Schedule(_))));
    }

    #[test]
    fn uncontrollable_step_rejected() {
        let m = xy2();
        let s = PulseSchedule::from_groups(vec![vec![PulseStep::pulse(TermHandle::Epsilon(1), 0.1)]]);
        assert!(matches!(apply_schedule(&s, &m), Err(Error::NotControllable(_))));
    }

    #[test]
    fn realize_preserves_angles() {
        let m = xy2();
        let mut s = PulseSchedule::new();
        s.push_step(PulseStep::pulse(TermHandle::JPlus(1, 2), -0.5));
        let r = s.realize(&m, 10.0).unwrap();
        let step = &r.groups()[0][0];
        assert!((step.angle() + 0.5).abs() < 1e-15);
        assert_eq!(step.mode(), PulseMode::Realistic);
        assert!((step.strength().abs() - 10.0 * m.background_magnitude().unwrap()).abs() < 1e-12);
    }
}
