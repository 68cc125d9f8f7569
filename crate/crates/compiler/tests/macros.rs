use glq_compiler::{
    bring_adjacent, ccnot_square, local_1q, local_1q_ops, measure_macro, route_pointer, Layout,
};
use glq_core::{named_unitary, LatticeGeometry, Parity, PulseOp, RowSet, SitePosition, Unitary2, C64};
use glq_sim::random::{random_state, random_unitary};
use glq_sim::{DenseState, HybridState, DEFAULT_MAX_CLUSTER_QUBITS};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s(col: usize, row: usize) -> SitePosition {
    SitePosition::new(col, row)
}

/// Dense lattice vector with `amps` (little-endian over `sites`) and every
/// site in `ones` set.
fn embed(g: &LatticeGeometry, sites: &[SitePosition], amps: &[C64], ones: &[SitePosition]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); 1 << g.num_sites()];
    let base: usize = ones.iter().map(|p| 1 << g.index(*p)).sum();
    for (k, a) in amps.iter().enumerate() {
        let mut idx = base;
        for (j, p) in sites.iter().enumerate() {
            if k >> j & 1 == 1 {
                idx |= 1 << g.index(*p);
            }
        }
        out[idx] = *a;
    }
    out
}

fn run_dense(g: LatticeGeometry, ops: &[PulseOp], amps: Vec<C64>) -> Vec<C64> {
    let mut d = DenseState::from_amplitudes(g, amps, 0).unwrap();
    for (i, op) in ops.iter().enumerate() {
        d.apply(op, i);
    }
    d.amplitudes().to_vec()
}

fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>().norm_sqr()
}

/// Toffoli on little-endian (c1, c2, t) amplitudes.
fn toffoli(amps: &[C64]) -> Vec<C64> {
    let mut out = amps.to_vec();
    out.swap(0b011, 0b111);
    out
}

fn check_square(aux: SitePosition, control: SitePosition, target: SitePosition, spare: SitePosition) {
    let g = LatticeGeometry::new(4, 2).unwrap();
    let ops = ccnot_square(&g, aux, control, target).unwrap();
    // aux is the first control; c2 = control, t = target
    let sites = [aux, control, target];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut inputs: Vec<Vec<C64>> = (0..8)
        .map(|b| (0..8).map(|k| C64::new((k == b) as u8 as f64, 0.0)).collect())
        .collect();
    inputs.extend((0..20).map(|_| random_state(&mut rng, 8)));
    let mut trace = C64::new(0.0, 0.0);
    for (k, input) in inputs.iter().enumerate() {
        let out = run_dense(g, &ops, embed(&g, &sites, input, &[]));
        let want = embed(&g, &sites, &toffoli(input), &[]);
        let f = fidelity(&want, &out);
        assert!(f >= 1.0 - 1e-9, "input {k}: fidelity {f}");
        if k < 8 {
            trace += want.iter().zip(&out).map(|(x, y)| x.conj() * y).sum::<C64>();
            // spare site back to |0>
            let bit = 1 << g.index(spare);
            let leak: f64 = out
                .iter()
                .enumerate()
                .filter(|(i, _)| i & bit != 0)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            assert!(leak < 1e-20, "spare site populated for input {k}");
        }
    }
    // one global phase across the basis inputs
    assert!(trace.norm_sqr() / 64.0 >= 1.0 - 1e-9);
}

#[test]
fn ccnot_square_truth_table() {
    check_square(s(1, 1), s(2, 0), s(1, 0), s(2, 1));
    check_square(s(2, 1), s(1, 0), s(2, 0), s(1, 1));
    // pointer above the control
    check_square(s(2, 1), s(2, 0), s(1, 0), s(1, 1));
}

#[test]
fn ccnot_square_uses_the_native_gate_set() {
    let g = LatticeGeometry::new(4, 2).unwrap();
    let ops = ccnot_square(&g, s(1, 1), s(2, 0), s(1, 0)).unwrap();
    for op in &ops {
        match op {
            PulseOp::VControlled { u, .. } | PulseOp::HControlled { u, .. } => {
                assert!(matches!(u.name(), Some("Z" | "W" | "SZ")), "{op}");
            }
            PulseOp::HSwap {
                rows: RowSet::Register,
                ..
            } => {}
            other => panic!("unexpected op {other}"),
        }
    }
}

#[test]
fn ccnot_square_superposed_control() {
    let g = LatticeGeometry::new(4, 2).unwrap();
    let ops = ccnot_square(&g, s(1, 1), s(2, 0), s(1, 0)).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // control in |+>, aux = 1, target = 0
    let input = embed(&g, &[s(2, 0)], &[C64::new(h, 0.0), C64::new(h, 0.0)], &[s(1, 1)]);
    let out = run_dense(g, &ops, input);
    let mut want = vec![C64::new(0.0, 0.0); 256];
    want[1 << g.index(s(1, 1))] = C64::new(h, 0.0);
    want[(1 << g.index(s(1, 1))) | (1 << g.index(s(2, 0))) | (1 << g.index(s(1, 0)))] = C64::new(h, 0.0);
    assert!(fidelity(&want, &out) >= 1.0 - 1e-9);
}

fn two_row_layout(cols: usize, sites: &[SitePosition]) -> Layout {
    let g = LatticeGeometry::new(cols, 2).unwrap();
    Layout {
        geometry: g,
        qubit_site: sites.to_vec(),
        pointer_home: s(0, 1),
        pointer: s(0, 1),
    }
}

#[test]
fn route_to_same_site_is_empty() {
    let l = two_row_layout(6, &[s(1, 0)]);
    let (ops, _) = route_pointer(&l, s(3, 1), s(3, 1)).unwrap();
    assert!(ops.is_empty());
}

#[test]
fn route_four_columns() {
    let l = two_row_layout(6, &[s(1, 0)]);
    let (ops, after) = route_pointer(&l, s(0, 1), s(4, 1)).unwrap();
    assert_eq!(ops.len(), 4);
    for (i, op) in ops.iter().enumerate() {
        assert_eq!(
            *op,
            PulseOp::HSwap {
                rows: RowSet::Auxiliary,
                parity: Parity::of(i)
            }
        );
    }
    assert_eq!(after.pointer, s(4, 1));
    let mut h = HybridState::new(l.geometry, DEFAULT_MAX_CLUSTER_QUBITS, 0);
    h.apply(&PulseOp::InitPointer { site: s(0, 1) }, 0).unwrap();
    for (i, op) in ops.iter().enumerate() {
        h.apply(op, i + 1).unwrap();
    }
    for site in l.geometry.sites() {
        assert_eq!(h.classical_bit(site), Some(site == s(4, 1)), "{site}");
    }
}

#[test]
fn vertical_route_on_four_rows_moves_registers_consistently() {
    let g = LatticeGeometry::new(2, 4).unwrap();
    let l = Layout {
        geometry: g,
        qubit_site: vec![s(0, 0), s(1, 2)],
        pointer_home: s(0, 1),
        pointer: s(0, 1),
    };
    let (ops, after) = route_pointer(&l, s(0, 1), s(0, 3)).unwrap();
    assert!(ops.iter().all(|op| matches!(op, PulseOp::VSwap { .. })));
    assert_eq!(after.pointer, s(0, 3));
    // simulate with distinct random register states and check the layout
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (a, b) = (random_state(&mut rng, 2), random_state(&mut rng, 2));
    let mut h = HybridState::new(g, DEFAULT_MAX_CLUSTER_QUBITS, 0);
    h.prepare(&[l.qubit_site[0]], &a).unwrap();
    h.prepare(&[l.qubit_site[1]], &b).unwrap();
    h.apply(&PulseOp::InitPointer { site: s(0, 1) }, 0).unwrap();
    for (i, op) in ops.iter().enumerate() {
        h.apply(op, i + 1).unwrap();
    }
    assert_eq!(h.classical_bit(s(0, 3)), Some(true));
    for (q, want) in [a, b].iter().enumerate() {
        let got = h.amplitudes_over(&[after.qubit_site[q]]).unwrap();
        assert!(fidelity(want, &got) >= 1.0 - 1e-9);
        assert_eq!(g.row_kind(after.qubit_site[q].row), glq_core::RowKind::Register);
    }
}

#[test]
fn routing_rejects_register_sites() {
    let l = two_row_layout(6, &[s(1, 0)]);
    assert!(route_pointer(&l, s(0, 1), s(2, 0)).is_err());
}

proptest! {
    #[test]
    fn horizontal_routing_costs_distance(from in 0usize..10, to in 0usize..10) {
        let l = two_row_layout(10, &[s(1, 0)]);
        let (ops, after) = route_pointer(&l, s(from, 1), s(to, 1)).unwrap();
        prop_assert_eq!(ops.len(), from.abs_diff(to));
        let aux_only = ops.iter().all(|op| matches!(op, PulseOp::HSwap { rows: RowSet::Auxiliary, .. }));
        prop_assert!(aux_only);
        prop_assert_eq!(after.pointer, s(to, 1));
    }
}

/// Matrix of the pulse sequence on register site (1,0) with the pointer at (1,1).
fn reconstruct(ops: &[PulseOp]) -> [[C64; 2]; 2] {
    let g = LatticeGeometry::new(2, 2).unwrap();
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for b in 0..2 {
        let mut v = [C64::new(0.0, 0.0); 2];
        v[b] = C64::new(1.0, 0.0);
        let out = run_dense(g, ops, embed(&g, &[s(1, 0)], &v, &[s(1, 1)]));
        let got = [
            out[1 << g.index(s(1, 1))],
            out[(1 << g.index(s(1, 1))) | (1 << g.index(s(1, 0)))],
        ];
        for r in 0..2 {
            m[r][b] = got[r];
        }
    }
    m
}

fn assert_equal_up_to_phase(m: [[C64; 2]; 2], u: &Unitary2) {
    let overlap: C64 = (0..2)
        .flat_map(|r| (0..2).map(move |c| (r, c)))
        .map(|(r, c)| u.get(r, c).conj() * m[r][c])
        .sum();
    assert!((overlap.norm() / 2.0 - 1.0).abs() < 1e-9, "{m:?} vs {u:?}");
}

#[test]
fn local_1q_examples() {
    let z = Unitary2::pauli_z();
    assert_eq!(
        local_1q_ops(&z, Parity::Even),
        vec![PulseOp::VControlled {
            u: z,
            pairing: Parity::Even
        }]
    );
    let x = Unitary2::pauli_x();
    let ops = local_1q_ops(&x, Parity::Even);
    assert_eq!(
        ops[0],
        PulseOp::RamanRotate {
            rows: RowSet::Register,
            u: Unitary2::hadamard()
        }
    );
    assert_equal_up_to_phase(reconstruct(&ops), &x);
    let w = named_unitary("W").unwrap();
    let ops = local_1q_ops(&w, Parity::Even);
    assert_eq!(ops[0].unitary().unwrap().name(), Some("U8"));
    assert_equal_up_to_phase(reconstruct(&ops), &w);
}

#[test]
fn local_1q_random_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let u = random_unitary(&mut rng);
        assert_equal_up_to_phase(reconstruct(&local_1q_ops(&u, Parity::Even)), &u);
    }
}

#[test]
fn local_1q_leaves_bystanders_alone() {
    let g = LatticeGeometry::new(6, 2).unwrap();
    let l = Layout::default_for(2, g).unwrap();
    let u = Unitary2::ry(0.8) * Unitary2::rz(0.2);
    let (ops, after) = local_1q(&l, 1, &u).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (a, b) = (random_state(&mut rng, 2), random_state(&mut rng, 2));
    let mut h = HybridState::new(g, DEFAULT_MAX_CLUSTER_QUBITS, 0);
    h.prepare(&[l.site(0)], &a).unwrap();
    h.prepare(&[l.site(1)], &b).unwrap();
    h.apply(&PulseOp::InitPointer { site: l.pointer }, 0).unwrap();
    for (i, op) in ops.iter().enumerate() {
        h.apply(op, i + 1).unwrap();
    }
    let ub = [
        u.get(0, 0) * b[0] + u.get(0, 1) * b[1],
        u.get(1, 0) * b[0] + u.get(1, 1) * b[1],
    ];
    assert!(fidelity(&a, &h.amplitudes_over(&[after.site(0)]).unwrap()) >= 1.0 - 1e-9);
    assert!(fidelity(&ub, &h.amplitudes_over(&[after.site(1)]).unwrap()) >= 1.0 - 1e-9);
}

fn bring(cols: usize, c1: usize, c2: usize) -> (Vec<PulseOp>, Layout, usize) {
    let l = two_row_layout(cols, &[s(c1, 0), s(c2, 0)]);
    bring_adjacent(&l, 0, 1).unwrap()
}

#[test]
fn bring_adjacent_examples() {
    // neighbours: nothing to do
    let (ops, _, swaps) = bring(8, 2, 3);
    assert!(ops.is_empty());
    assert_eq!(swaps, 0);
    // two sites between: one register swap round
    let (ops, after, swaps) = bring(8, 1, 4);
    assert_eq!(
        ops,
        vec![PulseOp::HSwap {
            rows: RowSet::Register,
            parity: Parity::Odd
        }]
    );
    assert_eq!(swaps, 0);
    assert_eq!(after.site(0).col.abs_diff(after.site(1).col), 1);
    // three sites between: one pointer CSWAP, then convergence
    let (_, after, swaps) = bring(10, 1, 5);
    assert_eq!(swaps, 1);
    assert_eq!(after.site(0).col.abs_diff(after.site(1).col), 1);
}

#[test]
fn bring_adjacent_preserves_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (c1, c2, c3) in [(1, 5, 8), (6, 1, 3), (0, 9, 4), (2, 4, 7)] {
        let l = two_row_layout(10, &[s(c1, 0), s(c2, 0), s(c3, 0)]);
        let (ops, after, _) = bring_adjacent(&l, 0, 1).unwrap();
        assert_eq!(after.site(0).col.abs_diff(after.site(1).col), 1);
        let states: Vec<Vec<C64>> = (0..3).map(|_| random_state(&mut rng, 2)).collect();
        let mut h = HybridState::new(l.geometry, DEFAULT_MAX_CLUSTER_QUBITS, 0);
        for (q, st) in states.iter().enumerate() {
            h.prepare(&[l.site(q)], st).unwrap();
        }
        h.apply(&PulseOp::InitPointer { site: l.pointer }, 0).unwrap();
        for (i, op) in ops.iter().enumerate() {
            h.apply(op, i + 1).unwrap();
        }
        for (q, st) in states.iter().enumerate() {
            let got = h.amplitudes_over(&[after.site(q)]).unwrap();
            assert!(fidelity(st, &got) >= 1.0 - 1e-9, "qubit {q} for {c1},{c2},{c3}");
        }
        let aux_ones: Vec<SitePosition> = l
            .geometry
            .sites()
            .filter(|p| p.row == 1 && h.classical_bit(*p) == Some(true))
            .collect();
        assert_eq!(aux_ones, vec![after.pointer]);
    }
}

#[test]
fn bring_adjacent_rejects_rows() {
    let g = LatticeGeometry::new(4, 4).unwrap();
    let l = Layout {
        geometry: g,
        qubit_site: vec![s(0, 0), s(1, 2)],
        pointer_home: s(0, 1),
        pointer: s(0, 1),
    };
    assert!(bring_adjacent(&l, 0, 1).is_err());
}

/// Run measure_macro on qubit 0 in state `amps` next to a bystander.
fn measure_shots(amps: &[C64], shots: u64) -> usize {
    let g = LatticeGeometry::new(6, 2).unwrap();
    let l = Layout::default_for(2, g).unwrap();
    let (ops, after, idx, site) = measure_macro(&l, 0).unwrap();
    let bystander = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
    let mut prefix = HybridState::new(g, DEFAULT_MAX_CLUSTER_QUBITS, 0);
    prefix.prepare(&[l.site(0)], amps).unwrap();
    prefix.prepare(&[l.site(1)], &bystander).unwrap();
    prefix
        .apply(&PulseOp::InitPointer { site: l.pointer }, 0)
        .unwrap();
    let mut ones = 0;
    for shot in 0..shots {
        let mut h = prefix.clone();
        h.reseed(77, shot);
        let mut rec = None;
        for (i, op) in ops.iter().enumerate() {
            if let Some(r) = h.apply(op, i).unwrap() {
                assert_eq!(i, idx);
                rec = Some(r);
            }
        }
        let rec = rec.unwrap();
        assert!(rec.outcomes.iter().all(|o| o.site != after.pointer));
        let o = rec.outcomes.iter().find(|o| o.site == site).unwrap();
        ones += o.outcome as usize;
        let by = h.amplitudes_over(&[after.site(1)]).unwrap();
        assert!(fidelity(&bystander, &by) >= 1.0 - 1e-9);
        // scratch cleared, pointer intact
        assert_eq!(h.classical_bit(site), Some(false));
        assert_eq!(h.classical_bit(after.pointer), Some(true));
    }
    ones
}

#[test]
fn measuring_one_always_reads_one() {
    let ones = measure_shots(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], 20);
    assert_eq!(ones, 20);
    let ones = measure_shots(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], 20);
    assert_eq!(ones, 0);
}

#[test]
fn measuring_plus_is_fair() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ones = measure_shots(&[C64::new(h, 0.0), C64::new(h, 0.0)], 10_000);
    let f = ones as f64 / 10_000.0;
    assert!((f - 0.5).abs() <= 0.015, "frequency {f}");
}

#[test]
fn two_pointers_apply_the_gate_twice() {
    let g = LatticeGeometry::new(8, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let u = random_unitary(&mut rng);
    let ops = local_1q_ops(&u, Parity::Even);
    let targets = [s(1, 0), s(5, 0)];
    let pointers = [s(1, 1), s(5, 1)];
    let register: Vec<SitePosition> = (0..8).map(|c| s(c, 0)).collect();
    let amps = random_state(&mut rng, 1 << 8);
    let input = embed(&g, &register, &amps, &pointers);
    let out = run_dense(g, &ops, input);
    // oracle: u on the two target bits of the register vector
    let mut want = amps.clone();
    for t in targets {
        glq_sim::kernel::apply_1q(&mut want, t.col, &u);
    }
    let want = embed(&g, &register, &want, &pointers);
    let f = fidelity(&want, &out);
    assert!(f >= 1.0 - 1e-9, "fidelity {f}");
}
