//! Order finding for N = 15 with a two-bit counting register.

use std::f64::consts::FRAC_PI_2;

use glq_core::{LatticeGeometry, Unitary2};
use glq_sim::{HybridState, MeasurementRecord, DEFAULT_MAX_CLUSTER_QUBITS};

use crate::circuit::{Circuit, Gate};
use crate::compile::{compile, CompiledProgram};
use crate::error::{CompileError, Result};
use crate::layout::Layout;

pub const N: u64 = 15;
pub const SUPPORTED_A: [u64; 2] = [7, 11];
/// Counting-register bits.
pub const COUNT_BITS: usize = 2;
pub const WIDTH: usize = COUNT_BITS + 4;

fn check_a(a: u64) -> Result<()> {
    if SUPPORTED_A.contains(&a) {
        Ok(())
    } else {
        Err(CompileError::Unsupported(format!(
            "a = {a}; supported values are 7 and 11"
        )))
    }
}

fn controlled_phase(c: &mut Circuit, a: usize, b: usize, theta: f64) -> Result<()> {
    c.push(Gate::OneQubit(a, Unitary2::phase(theta / 2.0)))?;
    c.push(Gate::CNOT(a, b))?;
    c.push(Gate::OneQubit(b, Unitary2::phase(-theta / 2.0)))?;
    c.push(Gate::CNOT(a, b))?;
    c.push(Gate::OneQubit(b, Unitary2::phase(theta / 2.0)))
}

/// Qubits 0 and 1 count (0 is the low exponent bit), 2..6 hold y = a^x mod 15
/// little-endian. The final swap of the inverse transform is left to
/// [`counting_value`].
pub fn factor15_circuit(a: u64, measure: bool) -> Result<Circuit> {
    check_a(a)?;
    let (x0, x1) = (0, 1);
    let y = |i: usize| 2 + i;
    let mut c = Circuit::new(WIDTH);
    c.push(Gate::OneQubit(y(0), Unitary2::pauli_x()))?;
    c.push(Gate::OneQubit(x0, Unitary2::hadamard()))?;
    c.push(Gate::OneQubit(x1, Unitary2::hadamard()))?;
    match a {
        7 => {
            // y *= 7 when x0; y *= 4 (rotate by two bits) when x1
            c.push(Gate::CNOT(x0, y(1)))?;
            c.push(Gate::CNOT(x0, y(2)))?;
            c.push(Gate::CSWAP(x1, y(0), y(2)))?;
            c.push(Gate::CSWAP(x1, y(1), y(3)))?;
        }
        _ => {
            // 11^2 = 1 mod 15, so x1 does nothing
            c.push(Gate::CNOT(x0, y(1)))?;
            c.push(Gate::CNOT(x0, y(3)))?;
        }
    }
    c.push(Gate::OneQubit(x1, Unitary2::hadamard()))?;
    controlled_phase(&mut c, x0, x1, -FRAC_PI_2)?;
    c.push(Gate::OneQubit(x0, Unitary2::hadamard()))?;
    if measure {
        c.push(Gate::Measure(x0))?;
        c.push(Gate::Measure(x1))?;
    }
    Ok(c)
}

/// Counting-register value from the measured bits of qubits 0 and 1.
pub fn counting_value(bit0: u8, bit1: u8) -> usize {
    2 * bit0 as usize + bit1 as usize
}

/// Lattice of three columns per logical qubit and two rows.
pub fn factor15_geometry() -> LatticeGeometry {
    LatticeGeometry::new(3 * WIDTH, 2).expect("valid geometry")
}

pub fn factor15_program(a: u64) -> Result<(Circuit, CompiledProgram)> {
    let circuit = factor15_circuit(a, true)?;
    let layout = Layout::default_for(WIDTH, factor15_geometry())?;
    let compiled = compile(&circuit, &layout)?;
    Ok((circuit, compiled))
}

fn pow_mod(a: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * a % m)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Denominators of the continued-fraction convergents of `num/den`.
fn convergent_denominators(mut num: u64, mut den: u64) -> Vec<u64> {
    let (mut q_prev, mut q) = (1u64, 0u64);
    let mut out = Vec::new();
    while den != 0 {
        let t = num / den;
        (q_prev, q) = (q, t * q + q_prev);
        out.push(q);
        (num, den) = (den, num % den);
    }
    out.retain(|&d| d > 0);
    out.dedup();
    out
}

/// Period candidate read from outcome `c`: the first convergent denominator
/// `r <= N` of `c / 2^COUNT_BITS` with `a^r = 1 mod N`.
pub fn period_from_outcome(a: u64, c: usize) -> Option<u64> {
    if c == 0 {
        return None;
    }
    convergent_denominators(c as u64, 1 << COUNT_BITS)
        .into_iter()
        .filter(|&r| r <= N)
        .find(|&r| pow_mod(a, r, N) == 1)
}

/// Nontrivial factors from an even period, via gcd(a^{r/2} ± 1, N).
pub fn factors_from_period(a: u64, r: u64) -> Option<(u64, u64)> {
    if !r.is_multiple_of(2) {
        return None;
    }
    let h = pow_mod(a, r / 2, N);
    let (p, q) = (gcd(h + N - 1, N), gcd(h + 1, N));
    let ok = |f: u64| f > 1 && f < N;
    if ok(p) && ok(q) && p * q == N {
        Some((p.min(q), p.max(q)))
    } else {
        None
    }
}

/// One classical post-processing attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub shot: usize,
    pub outcome: usize,
    pub period: Option<u64>,
    pub factors: Option<(u64, u64)>,
}

#[derive(Debug, Clone)]
pub struct FactorRun {
    pub a: u64,
    pub seed: u64,
    pub counts: [usize; 1 << COUNT_BITS],
    pub outcomes: Vec<usize>,
    /// Attempts in shot order, stopping at the first success.
    pub attempts: Vec<Attempt>,
    pub factors: Option<(u64, u64)>,
    pub peak_cluster_size: usize,
    pub ops: usize,
}

impl FactorRun {
    pub fn shots(&self) -> usize {
        self.outcomes.len()
    }

    pub fn frequency(&self, c: usize) -> f64 {
        self.counts[c] as f64 / self.shots().max(1) as f64
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = format!(
            "# a={} seed={} shots={}\noutcome,count,frequency\n",
            self.a,
            self.seed,
            self.shots()
        );
        for c in 0..self.counts.len() {
            out.push_str(&format!("{c},{},{:.6}\n", self.counts[c], self.frequency(c)));
        }
        out
    }
}

/// Post-process outcomes in shot order until one gives factors. Outcomes
/// that yield no period (0) or an odd or useless period are retried with
/// the next shot.
pub fn postprocess(a: u64, outcomes: &[usize]) -> Vec<Attempt> {
    let mut attempts = Vec::new();
    for (shot, &c) in outcomes.iter().enumerate() {
        let period = period_from_outcome(a, c);
        let factors = period.and_then(|r| factors_from_period(a, r));
        attempts.push(Attempt {
            shot,
            outcome: c,
            period,
            factors,
        });
        if factors.is_some() {
            break;
        }
    }
    attempts
}

/// Compile, then sample `shots` runs on the hybrid simulator. The unitary
/// prefix runs once; each shot continues from a copy with its own stream.
pub fn run_factor15(a: u64, shots: usize, seed: u64) -> Result<FactorRun> {
    let (_, compiled) = factor15_program(a)?;
    let program = &compiled.program;
    let split = program
        .ops
        .iter()
        .position(|op| op.is_measurement())
        .unwrap_or(program.ops.len());
    let mut prefix = HybridState::new(program.geometry, DEFAULT_MAX_CLUSTER_QUBITS, seed);
    for (i, op) in program.ops[..split].iter().enumerate() {
        prefix.apply(op, i)?;
    }
    let mut peak = prefix.peak_cluster_size();
    let mut counts = [0usize; 1 << COUNT_BITS];
    let mut outcomes = Vec::with_capacity(shots);
    for shot in 0..shots {
        let mut state = prefix.clone();
        state.reseed(seed, shot as u64);
        let mut records: Vec<MeasurementRecord> = Vec::new();
        for (i, op) in program.ops.iter().enumerate().skip(split) {
            if let Some(r) = state.apply(op, i)? {
                records.push(r);
            }
        }
        peak = peak.max(state.peak_cluster_size());
        let bit = |q| {
            compiled
                .outcome(&records, q)
                .ok_or_else(|| CompileError::Unsupported(format!("qubit {q} was not measured")))
        };
        let c = counting_value(bit(0)?, bit(1)?);
        counts[c] += 1;
        outcomes.push(c);
    }
    let attempts = postprocess(a, &outcomes);
    let factors = attempts.last().and_then(|t| t.factors);
    Ok(FactorRun {
        a,
        seed,
        counts,
        outcomes,
        attempts,
        factors,
        peak_cluster_size: peak,
        ops: program.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert_eq!(convergent_denominators(1, 4), vec![1, 4]);
        assert_eq!(convergent_denominators(3, 4), vec![1, 4]);
        assert_eq!(convergent_denominators(2, 4), vec![1, 2]);
    }

    #[test]
    fn outcome_half_fails_for_seven() {
        assert_eq!(period_from_outcome(7, 2), None);
        assert_eq!(period_from_outcome(7, 1), Some(4));
        assert_eq!(period_from_outcome(7, 3), Some(4));
        assert_eq!(period_from_outcome(11, 2), Some(2));
        assert_eq!(period_from_outcome(11, 0), None);
    }

    #[test]
    fn factors_from_known_periods() {
        assert_eq!(factors_from_period(7, 4), Some((3, 5)));
        assert_eq!(factors_from_period(11, 2), Some((3, 5)));
        assert_eq!(factors_from_period(7, 2), None);
    }

    #[test]
    fn retries_until_success() {
        let a = postprocess(7, &[0, 2, 1, 3]);
        assert_eq!(a.len(), 3);
        assert_eq!(a[2].factors, Some((3, 5)));
    }

    #[test]
    fn rejects_other_bases() {
        assert!(factor15_circuit(4, true).is_err());
    }
}
