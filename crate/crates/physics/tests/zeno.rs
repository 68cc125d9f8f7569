use glq_physics::zeno::{rabi_fidelity, sweep_csv};
use glq_physics::*;
use proptest::prelude::*;

#[test]
fn no_measurement_laser_is_plain_rabi() {
    let p = ZenoParams::standard(0.0);
    let out = zeno_initialize(&p).unwrap();
    assert!((out.fidelity - rabi_fidelity(&p)).abs() < 1e-9);
    for n in &out.neighbours {
        let want = 1.0 - (n.coupling * p.duration).sin().powi(2);
        assert!((n.fidelity - want).abs() < 1e-9);
        assert!((n.success - 1.0).abs() < 1e-12);
    }
}

#[test]
fn dark_neighbours_stay_put() {
    let mut p = ZenoParams::standard(10.0);
    p.j_center = 0.0;
    let out = zeno_initialize(&p).unwrap();
    assert!((out.fidelity - 1.0).abs() < 1e-12 && (out.success - 1.0).abs() < 1e-12);
}

#[test]
fn sweep_is_monotone_and_crosses_the_threshold() {
    let omegas: Vec<f64> = (0..20).map(|k| 5.0 * k as f64).collect();
    let sweep = zeno_sweep(&ZenoParams::standard(0.0), &omegas).unwrap();
    assert!(sweep.windows(2).all(|w| w[1].fidelity >= w[0].fidelity));
    let star = zeno_threshold(&sweep, 0.99).expect("threshold inside the sweep");
    assert!(sweep
        .iter()
        .filter(|p| p.omega >= star)
        .all(|p| p.fidelity > 0.99));
    assert!(sweep_csv(&sweep).starts_with("omega,F,P\n"));
}

#[test]
fn trajectories_agree_with_no_jump_evolution() {
    for omega in [10.0, 40.0] {
        let p = ZenoParams::standard(omega);
        let exact = zeno_initialize(&p).unwrap();
        let mc = zeno_monte_carlo(&p, 10_000, 5).unwrap();
        assert!((mc.zeno.fidelity - exact.fidelity).abs() < 1e-3, "F at {omega}");
        assert!((mc.zeno.success - exact.success).abs() < 1e-3, "P at {omega}");
    }
}

#[test]
fn monte_carlo_is_deterministic() {
    let p = ZenoParams::standard(20.0);
    let a = zeno_monte_carlo(&p, 500, 3).unwrap();
    let b = zeno_monte_carlo(&p, 500, 3).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn fidelity_and_success_are_probabilities(omega in 0.0f64..100.0, gamma in 0.1f64..50.0, t in 0.05f64..3.0) {
        let p = ZenoParams { omega, gamma, duration: t, ..ZenoParams::standard(0.0) };
        let out = zeno_initialize(&p).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&out.fidelity));
        prop_assert!((0.0..=1.0 + 1e-12).contains(&out.success));
    }
}
