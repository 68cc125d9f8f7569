use glq_compiler::{compile, verify, Circuit, Gate, Layout};
use glq_core::{named_unitary, LatticeGeometry, Unitary2};

fn check(width: usize, gates: Vec<Gate>) -> f64 {
    let mut c = Circuit::new(width);
    for g in gates {
        c.push(g).unwrap();
    }
    let g = LatticeGeometry::new(3 * width, 2).unwrap();
    let layout = Layout::default_for(width, g).unwrap();
    let compiled = compile(&c, &layout).unwrap();
    let r = verify(&c, &compiled.program, 5).unwrap();
    assert!(r.passed(), "{c}\n{r}");
    r.worst_fidelity()
}

#[test]
fn single_qubit_gates() {
    for name in ["X", "Y", "Z", "H", "SZ", "U8", "W"] {
        check(1, vec![Gate::OneQubit(0, named_unitary(name).unwrap())]);
    }
    check(2, vec![Gate::OneQubit(1, Unitary2::ry(0.3) * Unitary2::rz(1.1))]);
}

#[test]
fn two_and_three_qubit_gates() {
    check(2, vec![Gate::CNOT(0, 1)]);
    check(2, vec![Gate::CNOT(1, 0)]);
    check(2, vec![Gate::CZ(0, 1)]);
    check(3, vec![Gate::CNOT(0, 2)]);
    check(3, vec![Gate::CNOT(2, 0)]);
    check(3, vec![Gate::CCNOT(0, 1, 2)]);
    check(3, vec![Gate::CCNOT(2, 0, 1)]);
    check(3, vec![Gate::CSWAP(0, 1, 2)]);
}
