//! Durations that turn the spin couplings into two-qubit gates (hbar = 1).

use std::f64::consts::{PI, TAU};

use crate::couplings::SpinCouplings;
use crate::error::{PhysicsError, Result};

pub const GRID_POINTS: usize = 10_000;
const BISECT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateTarget {
    ControlledPhase,
    ExchangeSwap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateTiming {
    pub duration: f64,
    /// Phase-gate angles `(phi1, phi2)` left on the two qubits:
    /// `exp(-i lambda1 t zz) ∝ (P(phi1) ⊗ P(phi2)) CP`. Zero for the swap.
    pub z_angles: (f64, f64),
    /// Swap convention: `exp(-i lambda2 t (xx + yy)) = SWAP · diag(1, e^{i chi}, e^{i chi}, 1)`.
    pub chi: f64,
}

fn wrap(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// First root of `f` on `(0, period]`, located on a grid and refined by
/// bisection. `f` must be continuous between grid points where it changes sign.
fn first_root(f: impl Fn(f64) -> f64, period: f64) -> f64 {
    let step = period / GRID_POINTS as f64;
    let mut prev = f(step * 1e-6);
    for k in 1..=GRID_POINTS {
        let (a, b) = ((k - 1) as f64 * step, k as f64 * step);
        let cur = f(b);
        if cur == 0.0 {
            return b;
        }
        // a jump of the wrapped phase is not a root
        if prev.signum() != cur.signum() && (prev - cur).abs() < PI {
            let (mut lo, mut hi) = (a.max(step * 1e-6), b);
            while hi - lo > BISECT_TOL * period.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == f(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev = cur;
    }
    unreachable!("the invariant phase sweeps a full turn within one period")
}

pub fn gate_time(c: &SpinCouplings, target: GateTarget) -> Result<GateTiming> {
    match target {
        GateTarget::ControlledPhase => {
            let l = c.lambda1;
            if l == 0.0 || !l.is_finite() {
                return Err(PhysicsError::ZeroCoupling("lambda1"));
            }
            // exp(-i l t zz) = diag(e^{-ia}, e^{ia}, e^{ia}, e^{-ia}), a = l t.
            // Local z rotations leave arg d00 - arg d01 - arg d10 + arg d11 = -4a
            // unchanged; CP needs pi.
            let invariant = |t: f64| wrap(-4.0 * l * t - PI);
            let t = first_root(invariant, PI / l.abs());
            let a = l * t;
            // d / diag(1,1,1,-1) relative to d00
            let phi = wrap(2.0 * a);
            Ok(GateTiming {
                duration: t,
                z_angles: (phi, phi),
                chi: 0.0,
            })
        }
        GateTarget::ExchangeSwap => {
            let l = c.lambda2;
            if l == 0.0 || !l.is_finite() {
                return Err(PhysicsError::ZeroCoupling("lambda2"));
            }
            // On {01, 10}: exp(-i 2 l t x) = cos(2lt) - i sin(2lt) x; swap-class once cos = 0
            let t = first_root(|t: f64| (2.0 * l * t).cos(), PI / l.abs());
            let chi = wrap(-(2.0 * l * t).sin().signum() * PI / 2.0);
            Ok(GateTiming {
                duration: t,
                z_angles: (0.0, 0.0),
                chi,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_range() {
        assert!((wrap(3.0 * PI) - PI).abs() < 1e-15);
        assert!((wrap(-PI) - PI).abs() < 1e-15);
        assert!((wrap(0.5) - 0.5).abs() < 1e-15);
    }
}
