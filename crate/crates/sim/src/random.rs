//! Random programs and states for cross-checking the two backends.

use std::f64::consts::PI;

use glq_core::{
    named_unitary, LatticeGeometry, Parity, PulseOp, PulseProgram, RowSet, SitePosition, Unitary2, C64,
    NAMED_GATES,
};
use rand::Rng;

pub fn random_unitary<R: Rng>(rng: &mut R) -> Unitary2 {
    if rng.gen_bool(0.5) {
        named_unitary(NAMED_GATES[rng.gen_range(0..NAMED_GATES.len())]).expect("named gate")
    } else {
        let mut a = || rng.gen_range(-PI..PI);
        let (x, y, z, p) = (a(), a(), a(), a());
        (Unitary2::rz(x) * Unitary2::ry(y) * Unitary2::rz(z)).scaled(C64::from_polar(1.0, p))
    }
}

fn parity<R: Rng>(rng: &mut R) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn rowset<R: Rng>(rng: &mut R) -> RowSet {
    RowSet::ALL[rng.gen_range(0..3)]
}

pub fn random_op<R: Rng>(rng: &mut R, g: &LatticeGeometry) -> PulseOp {
    match rng.gen_range(0..7) {
        0 => PulseOp::RamanRotate {
            rows: rowset(rng),
            u: random_unitary(rng),
        },
        1 => PulseOp::HSwap {
            rows: rowset(rng),
            parity: parity(rng),
        },
        2 => PulseOp::VSwap { parity: parity(rng) },
        3 => PulseOp::VControlled {
            u: random_unitary(rng),
            pairing: parity(rng),
        },
        4 => PulseOp::HControlled {
            u: random_unitary(rng),
            rows: rowset(rng),
            parity: parity(rng),
        },
        5 => PulseOp::MeasureAuxAlternate { parity: parity(rng) },
        _ => PulseOp::InitPointer {
            site: SitePosition::new(
                rng.gen_range(0..g.columns()),
                2 * rng.gen_range(0..g.rows() / 2) + 1,
            ),
        },
    }
}

/// Lattice of 2..=4 columns and 2 or 4 rows.
pub fn random_geometry<R: Rng>(rng: &mut R) -> LatticeGeometry {
    let cols = rng.gen_range(2..=4);
    let rows = if rng.gen_bool(0.5) { 2 } else { 4 };
    LatticeGeometry::new(cols, rows).expect("valid sizes")
}

pub fn random_program<R: Rng>(rng: &mut R, g: LatticeGeometry, max_len: usize) -> PulseProgram {
    let len = rng.gen_range(0..=max_len);
    let ops = (0..len).map(|_| random_op(rng, &g)).collect();
    PulseProgram::with_ops(g, ops)
}

/// Normalized state with Gaussian-ish random amplitudes.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        *a /= n;
    }
    v
}
