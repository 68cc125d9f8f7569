use glq_physics::bose_hubbard::effective_hamiltonian;
use glq_physics::linalg::{propagator, spectral_norm, CMatrix, C64};
use glq_physics::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn diag(d: [C64; 4]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d))
}

fn equal_up_to_phase(a: &CMatrix, b: &CMatrix) -> bool {
    let overlap: C64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    (overlap.norm() - 4.0).abs() < 1e-9
}

fn cp_check(lambda1: f64) -> GateTiming {
    let c = SpinCouplings::new(lambda1, 0.0);
    let g = gate_time(&c, GateTarget::ControlledPhase).unwrap();
    let u = propagator(&effective_hamiltonian(&c, 0.0), g.duration);
    let (p1, p2) = g.z_angles;
    let e = |a: f64| C64::from_polar(1.0, a);
    let one = C64::new(1.0, 0.0);
    let locals = diag([one, e(p2), e(p1), e(p1 + p2)]);
    let cp = diag([one, one, one, -one]);
    assert!(equal_up_to_phase(&u, &(locals * cp)), "lambda1 = {lambda1}");
    g
}

#[test]
fn unit_ising_coupling() {
    let g = cp_check(1.0);
    assert!((g.duration - PI / 4.0).abs() < 1e-11);
    assert!((g.z_angles.0 - PI / 2.0).abs() < 1e-10);
    assert!((g.z_angles.1 - PI / 2.0).abs() < 1e-10);
}

#[test]
fn negative_coupling() {
    let g = cp_check(-0.3);
    assert!((g.duration - PI / 1.2).abs() < 1e-10);
}

#[test]
fn exchange_gives_swap_up_to_phases() {
    for l2 in [1.0, -0.25] {
        let c = SpinCouplings::new(0.0, l2);
        let g = gate_time(&c, GateTarget::ExchangeSwap).unwrap();
        assert!((g.duration - PI / (4.0 * l2.abs())).abs() < 1e-10);
        let u = propagator(&effective_hamiltonian(&c, 0.0), g.duration);
        let (o, l, ph) = (
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::from_polar(1.0, g.chi),
        );
        let swap = CMatrix::from_row_slice(4, 4, &[l, o, o, o, o, o, l, o, o, l, o, o, o, o, o, l]);
        let want = swap * diag([l, ph, ph, l]);
        assert!(spectral_norm(&(u - want)) < 1e-9, "lambda2 = {l2}");
        assert!((g.chi + PI / 2.0 * l2.signum()).abs() < 1e-12);
    }
}

#[test]
fn zero_couplings_are_rejected() {
    assert!(gate_time(&SpinCouplings::new(1.0, 0.0), GateTarget::ExchangeSwap).is_err());
    assert!(gate_time(&SpinCouplings::new(0.0, 1.0), GateTarget::ControlledPhase).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn doubling_the_coupling_halves_the_time(l in 0.05f64..5.0, sign in prop::bool::ANY) {
        let l = if sign { l } else { -l };
        let t1 = gate_time(&SpinCouplings::new(l, 0.0), GateTarget::ControlledPhase).unwrap().duration;
        let t2 = gate_time(&SpinCouplings::new(2.0 * l, 0.0), GateTarget::ControlledPhase).unwrap().duration;
        prop_assert!((t1 - 2.0 * t2).abs() < 1e-9 * t1);
    }
}
