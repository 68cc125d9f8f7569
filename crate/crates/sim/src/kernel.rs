//! In-place statevector kernels. Bit `k` of a basis index is local qubit `k`.

use glq_core::{Unitary2, C64};

pub fn apply_1q(amps: &mut [C64], bit: usize, u: &Unitary2) {
    let m = u.matrix();
    let step = 1usize << bit;
    for i in 0..amps.len() {
        if i & step == 0 {
            let (a, b) = (amps[i], amps[i | step]);
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[i | step] = m[1][0] * a + m[1][1] * b;
        }
    }
}

pub fn apply_controlled(amps: &mut [C64], control: usize, target: usize, u: &Unitary2) {
    let m = u.matrix();
    let (c, t) = (1usize << control, 1usize << target);
    for i in 0..amps.len() {
        if i & c != 0 && i & t == 0 {
            let (a, b) = (amps[i], amps[i | t]);
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[i | t] = m[1][0] * a + m[1][1] * b;
        }
    }
}

pub fn swap_bits(amps: &mut [C64], a: usize, b: usize) {
    if a == b {
        return;
    }
    let (ma, mb) = (1usize << a, 1usize << b);
    for i in 0..amps.len() {
        if i & ma != 0 && i & mb == 0 {
            amps.swap(i, i ^ ma ^ mb);
        }
    }
}

/// Probability that `bit` reads 0.
pub fn prob_zero(amps: &[C64], bit: usize) -> f64 {
    let m = 1usize << bit;
    amps.iter()
        .enumerate()
        .filter(|(i, _)| i & m == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Keep the `bit = outcome` branch, drop the bit and rescale by `1/sqrt(p)`.
pub fn project_out(amps: &[C64], bit: usize, outcome: usize, p: f64) -> Vec<C64> {
    let scale = 1.0 / p.sqrt();
    (0..amps.len() / 2)
        .map(|j| amps[insert_bit(j, bit, outcome)] * scale)
        .collect()
}

/// Keep the `bit = outcome` branch in place, zeroing the other and rescaling.
pub fn project_in_place(amps: &mut [C64], bit: usize, outcome: usize, p: f64) {
    let scale = 1.0 / p.sqrt();
    let m = 1usize << bit;
    for (i, a) in amps.iter_mut().enumerate() {
        if ((i & m != 0) as usize) == outcome {
            *a *= scale;
        } else {
            *a = C64::new(0.0, 0.0);
        }
    }
}

/// Insert `value` at position `bit` of `j`, shifting higher bits up.
pub fn insert_bit(j: usize, bit: usize, value: usize) -> usize {
    let low = j & ((1 << bit) - 1);
    let high = (j >> bit) << (bit + 1);
    high | (value << bit) | low
}

pub fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|<a|b>|^2`.
pub fn overlap_fidelity(a: &[C64], b: &[C64]) -> f64 {
    inner(a, b).norm_sqr()
}
