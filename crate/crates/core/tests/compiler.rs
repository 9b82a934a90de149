mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use common::{antisymmetric_basis, block, c, evolve, fidelity, op, symmetric_basis, M};
use proptest::prelude::*;
use recoupler::compiler::{
    circuit_from_json, compile_circuit, compile_cphase_xxz, compile_cphase_xy, compile_euler, compile_gate,
    compile_heis_zz, compile_rx, compile_rz, compile_unitary, xzx_angles, xzx_matrix, CompileOptions, LogicalGate,
};
use recoupler::evolution::{apply_schedule, PulseSchedule};
use recoupler::model::{find_preset, xxz_antisymmetric_chain, ExchangeModel, ModelKind, TermHandle};
use recoupler::Error;

fn helium() -> ExchangeModel {
    find_preset("electrons_on_helium").unwrap().build(4).unwrap()
}

fn anti() -> ExchangeModel {
    xxz_antisymmetric_chain(4).unwrap()
}

fn hall() -> ExchangeModel {
    find_preset("quantum_hall").unwrap().build(4).unwrap()
}

fn dots() -> ExchangeModel {
    find_preset("spin_dots").unwrap().build(4).unwrap()
}

fn basis_of(model: &ExchangeModel) -> Vec<usize> {
    match model.kind() {
        ModelKind::XxzAntisymmetric => antisymmetric_basis(2),
        _ => symmetric_basis(2),
    }
}

fn other_basis_of(model: &ExchangeModel) -> Vec<usize> {
    match model.kind() {
        ModelKind::XxzAntisymmetric => symmetric_basis(2),
        _ => antisymmetric_basis(2),
    }
}

fn unitary(s: &PulseSchedule, model: &ExchangeModel) -> M {
    apply_schedule(s, model).unwrap().into_matrix()
}

// Logical targets built straight from Pauli strings on the two-qubit register.
fn rx_t(m: usize, theta: f64) -> M {
    evolve(&op(2, &[(m, 'X')]), theta / 2.0)
}

fn rz_t(m: usize, theta: f64) -> M {
    evolve(&op(2, &[(m, 'Z')]), theta / 2.0)
}

fn zz_t(phi: f64) -> M {
    evolve(&op(2, &[(1, 'Z'), (2, 'Z')]), -phi)
}

fn check(s: &PulseSchedule, model: &ExchangeModel, target: &M) {
    let u = unitary(s, model);
    let basis = basis_of(model);
    let f = fidelity(&u, target, &basis);
    let l = common::leakage(&u, &basis);
    assert!(f >= 1.0 - 1e-8, "fidelity {f} on {}", model.kind().name());
    assert!(l <= 1e-8, "leakage {l} on {}", model.kind().name());
}

#[test]
fn single_qubit_gates_in_every_model() {
    for model in [helium(), anti(), hall(), dots()] {
        for m in 1..=2 {
            for &theta in &[0.3, FRAC_PI_2, PI, -2.1] {
                check(&compile_rx(m, theta, &model).unwrap(), &model, &rx_t(m, theta));
                check(&compile_rz(m, theta, &model).unwrap(), &model, &rz_t(m, theta));
            }
            let (a, b, g) = (0.4, 1.9, -0.8);
            let target = &rx_t(m, a) * &rz_t(m, b) * &rx_t(m, g);
            check(&compile_euler(m, a, b, g, &model).unwrap(), &model, &target);
        }
    }
}

#[test]
fn two_qubit_gates() {
    for parallel in [true, false] {
        for model in [helium(), anti()] {
            check(&compile_cphase_xxz(1, &model, parallel).unwrap(), &model, &zz_t(FRAC_PI_4));
        }
    }
    check(&compile_cphase_xy(1, &hall()).unwrap(), &hall(), &zz_t(FRAC_PI_4));
    let model = dots();
    let j = model.coupling(2, 3).unwrap().jz;
    for &t in &[0.4, 1.0, 2.7] {
        // σ₂ᶻσ₃ᶻ is −Z₁Z₂ on the symmetric code.
        check(&compile_heis_zz(1, t, &model).unwrap(), &model, &zz_t(j * t));
    }
}

#[test]
fn step_counts() {
    let m = helium();
    let count = |s: PulseSchedule| (s.step_count_serial(), s.step_count_parallel());
    assert_eq!(count(compile_rx(1, 0.7, &m).unwrap()), (1, 1));
    assert_eq!(count(compile_rx(1, 0.0, &m).unwrap()), (0, 0));
    assert_eq!(count(compile_rz(1, 0.7, &m).unwrap()), (4, 4));
    assert_eq!(count(compile_rz(1, 0.0, &m).unwrap()), (0, 0));
    assert_eq!(count(compile_euler(1, 0.3, 0.5, 0.7, &m).unwrap()), (6, 6));
    assert_eq!(count(compile_euler(1, 0.3, 0.0, 0.7, &m).unwrap()), (1, 1));
    assert_eq!(count(compile_cphase_xxz(1, &m, true).unwrap()), (6, 4));
    assert_eq!(count(compile_cphase_xxz(1, &m, false).unwrap()), (6, 6));
    assert_eq!(count(compile_cphase_xy(1, &hall()).unwrap()), (5, 5));
    assert_eq!(count(compile_heis_zz(1, 0.9, &dots()).unwrap()), (6, 6));
}

#[test]
fn hadamard_like_rotation_takes_six_steps() {
    let h = M::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]) * c(0.5f64.sqrt(), 0.0);
    let s = compile_unitary(1, &h, &helium()).unwrap();
    assert_eq!(s.step_count_serial(), 6);
    let target = recoupler::encoding::embed_single(&h, 1, 2).unwrap();
    check(&s, &helium(), &target);
}

#[test]
fn compilation_is_deterministic() {
    let opts = CompileOptions::default();
    for model in [helium(), anti(), hall(), dots()] {
        for g in [
            LogicalGate::Rz { m: 2, theta: 1.1 },
            LogicalGate::Euler { m: 1, alpha: 0.2, beta: 0.3, gamma: 0.4 },
            LogicalGate::Cphase { m: 1 },
        ] {
            let a = compile_gate(&g, &model, opts).unwrap();
            let b = compile_gate(&g, &model, opts).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.to_json(), b.to_json());
        }
    }
}

#[test]
fn sector_independence() {
    let opts = CompileOptions::default();
    for model in [helium(), anti(), hall()] {
        let own = basis_of(&model);
        let other = other_basis_of(&model);
        for g in [
            LogicalGate::Rx { m: 1, theta: 0.9 },
            LogicalGate::Rz { m: 2, theta: -1.3 },
            LogicalGate::Euler { m: 1, alpha: 0.5, beta: 1.2, gamma: -0.4 },
            LogicalGate::Cphase { m: 1 },
        ] {
            let u = unitary(&compile_gate(&g, &model, opts).unwrap(), &model);
            assert!(block(&u, &own, &other).norm() < 1e-12);
            assert!(block(&u, &other, &own).norm() < 1e-12);
            let b = block(&u, &other, &other);
            assert!((b.adjoint() * &b - M::identity(4, 4)).norm() < 1e-10);
            assert!(common::leakage(&u, &other) < 1e-10);
            if g.qubits().len() == 1 {
                // Single-qubit generators vanish on the other code entirely.
                assert!(common::phase_distance(&b, &M::identity(4, 4)) < 1e-10, "{g}");
            }
        }
    }
}

#[test]
fn circuit_examples() {
    let opts = CompileOptions::default();
    let gates =
        circuit_from_json(r#"[{"gate":"rx","target":0,"angle":3.141592653589793},{"gate":"cphase","targets":[0,1]}]"#)
            .unwrap();
    let s = compile_circuit(&gates, &helium(), opts).unwrap();
    assert_eq!(s.step_count_parallel(), 5);
    assert_eq!(s.step_count_serial(), 7);
    check(&s, &helium(), &(zz_t(FRAC_PI_4) * rx_t(1, PI)));

    let empty = compile_circuit(&[], &helium(), opts).unwrap();
    assert_eq!(empty.step_count_serial(), 0);
    assert!(empty.groups().is_empty());

    let sandwich = [
        LogicalGate::Euler { m: 1, alpha: 0.1, beta: 0.2, gamma: 0.3 },
        LogicalGate::Cphase { m: 1 },
        LogicalGate::Euler { m: 2, alpha: 0.4, beta: 0.5, gamma: 0.6 },
    ];
    let serial = CompileOptions { parallel: false, ..opts };
    assert!(compile_circuit(&sandwich, &helium(), serial).unwrap().step_count_serial() <= 18);
}

#[test]
fn exact_cphase_adds_two_z_corrections() {
    let model = helium();
    let plain = compile_gate(&LogicalGate::Cphase { m: 1 }, &model, CompileOptions::default()).unwrap();
    let opts = CompileOptions { exact_cphase: true, ..CompileOptions::default() };
    let exact = compile_gate(&LogicalGate::Cphase { m: 1 }, &model, opts).unwrap();
    assert_eq!(exact.step_count_serial(), plain.step_count_serial() + 8);
    let cz = M::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]));
    check(&exact, &model, &cz);
}

#[test]
fn degenerate_spectrum_is_rejected() {
    let m = helium();
    let mut eps = m.epsilon().to_vec();
    eps[0] = 1.0;
    eps[1] = 1.0;
    let flat = ExchangeModel::new(m.kind(), 4, eps, m.couplings().to_vec(), m.controllable().iter().copied()).unwrap();
    assert!(matches!(compile_rz(1, 0.5, &flat), Err(Error::DegenerateSpectrum { qubit: 0, .. })));
    assert!(compile_rz(2, 0.5, &flat).is_ok());
    assert!(compile_rx(1, 0.5, &flat).is_ok());
}

#[test]
fn missing_handles_are_reported() {
    let m = hall();
    let nn: Vec<_> = m.controllable().iter().copied().filter(|h| *h != TermHandle::JPlus(1, 3)).collect();
    let short = ExchangeModel::new(m.kind(), 4, m.epsilon().to_vec(), m.couplings().to_vec(), nn).unwrap();
    assert!(matches!(compile_cphase_xy(1, &short), Err(Error::Connectivity(_))));
    // The xxz construction does not apply to an xy model.
    assert!(compile_cphase_xxz(1, &m, true).is_err());
    let bad = circuit_from_json(r#"[{"gate":"cphase","targets":[0,2]}]"#);
    assert!(matches!(bad, Err(Error::Gate { index: 0, .. })));
    let far = [LogicalGate::Rx { m: 1, theta: 0.1 }, LogicalGate::Rz { m: 3, theta: 0.1 }];
    assert!(matches!(compile_circuit(&far, &helium(), CompileOptions::default()), Err(Error::Gate { index: 1, .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn euler_angles_reconstruct_random_su2(
        a in -PI..PI, b in 0.0..PI, g in -PI..PI, phase in -PI..PI,
    ) {
        let u = xzx_matrix(a, b, g) * c(phase.cos(), phase.sin());
        let (a2, b2, g2) = xzx_angles(&u).unwrap();
        let back = xzx_matrix(a2, b2, g2);
        prop_assert!(common::phase_distance(&back, &u) <= 1e-8);
    }
}
