//! Pointer initialization with Zeno protection of the eight neighbours.
//!
//! Each neighbour is a three-level atom: |0> couples to |1> through the
//! leaked Raman amplitude, |1> couples to the decaying level |e> through
//! the measurement laser. Times are in units of 1/J at the pointer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{positive, PhysicsError, Result};
use crate::linalg::{expm, CMatrix, C64};

pub const DEFAULT_BEAM_WIDTH: f64 = 0.8;
pub const NEIGHBOUR_OFFSETS: [(i32, i32); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];
pub const ZENO_HEADER: &str = "omega,F,P";

/// Effective Raman coupling `Ω_a Ω_b* / Δ`.
pub fn raman_coupling(omega_a: C64, omega_b: C64, delta: f64) -> Result<C64> {
    if delta == 0.0 {
        return Err(PhysicsError::Invalid("Raman detuning is zero".into()));
    }
    Ok(omega_a * omega_b.conj() / delta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoParams {
    /// Raman coupling at the pointer site.
    pub j_center: f64,
    pub omega: f64,
    pub gamma: f64,
    pub duration: f64,
    /// Gaussian width in wavelengths.
    pub beam_width: f64,
    pub site_spacing: f64,
}

impl ZenoParams {
    /// π pulse at the pointer with `Γ = 20 J`.
    pub fn standard(omega: f64) -> Self {
        Self {
            j_center: 1.0,
            omega,
            gamma: 20.0,
            duration: std::f64::consts::FRAC_PI_2,
            beam_width: DEFAULT_BEAM_WIDTH,
            site_spacing: 0.5,
        }
    }

    pub fn check(&self) -> Result<()> {
        positive("Gamma", self.gamma)?;
        positive("duration", self.duration)?;
        positive("beam width", self.beam_width)?;
        if self.omega < 0.0 || !self.omega.is_finite() {
            return Err(PhysicsError::Invalid(format!("Omega = {}", self.omega)));
        }
        Ok(())
    }

    /// Residual Raman coupling at each neighbour, `J exp(-r²/(2w²))`.
    pub fn neighbour_couplings(&self) -> [f64; 8] {
        NEIGHBOUR_OFFSETS.map(|(dx, dy)| {
            let r2 = ((dx * dx + dy * dy) as f64) * self.site_spacing * self.site_spacing;
            self.j_center * (-r2 / (2.0 * self.beam_width * self.beam_width)).exp()
        })
    }
}

fn hamiltonian(j: f64, omega: f64, gamma: f64) -> [[C64; 3]; 3] {
    let z = C64::new(0.0, 0.0);
    let (j, o) = (C64::new(j, 0.0), C64::new(omega, 0.0));
    [[z, j, z], [j, z, o], [z, o, C64::new(0.0, -gamma / 2.0)]]
}

/// Fidelity and no-emission probability for one neighbour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighbourOutcome {
    pub coupling: f64,
    pub fidelity: f64,
    pub success: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZenoOutcome {
    pub neighbours: Vec<NeighbourOutcome>,
    /// Product of the neighbour fidelities.
    pub fidelity: f64,
    /// Probability that no neighbour emits.
    pub success: f64,
}

impl ZenoOutcome {
    fn from_neighbours(neighbours: Vec<NeighbourOutcome>) -> Self {
        Self {
            fidelity: neighbours.iter().map(|n| n.fidelity).product(),
            success: neighbours.iter().map(|n| n.success).product(),
            neighbours,
        }
    }
}

fn no_jump_state(j: f64, p: &ZenoParams) -> [C64; 3] {
    let h = hamiltonian(j, p.omega, p.gamma);
    let m = CMatrix::from_fn(3, 3, |r, c| h[r][c] * C64::new(0.0, -p.duration));
    let u = expm(&m);
    [u[(0, 0)], u[(1, 0)], u[(2, 0)]]
}

/// Evolution under the no-jump Hamiltonian: F is the |0> population
/// conditioned on no emission, P the no-emission probability.
pub fn zeno_initialize(p: &ZenoParams) -> Result<ZenoOutcome> {
    p.check()?;
    let neighbours = p
        .neighbour_couplings()
        .iter()
        .map(|&j| {
            let psi = no_jump_state(j, p);
            let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
            NeighbourOutcome {
                coupling: j,
                fidelity: psi[0].norm_sqr() / norm,
                success: norm,
            }
        })
        .collect();
    Ok(ZenoOutcome::from_neighbours(neighbours))
}

/// Closed-form fidelity without the measurement laser: `Π cos²(J_n t)`.
pub fn rabi_fidelity(p: &ZenoParams) -> f64 {
    p.neighbour_couplings()
        .iter()
        .map(|j| (j * p.duration).cos().powi(2))
        .product()
}

fn rk4_path(j: f64, p: &ZenoParams, start: usize, steps: usize) -> Vec<[C64; 3]> {
    let h = hamiltonian(j, p.omega, p.gamma);
    let dt = p.duration / steps as f64;
    let deriv = |psi: &[C64; 3]| -> [C64; 3] {
        let mut out = [C64::new(0.0, 0.0); 3];
        for r in 0..3 {
            let s: C64 = (0..3).map(|c| h[r][c] * psi[c]).sum();
            out[r] = C64::new(0.0, -1.0) * s;
        }
        out
    };
    let axpy = |a: &[C64; 3], k: &[C64; 3], f: f64| [a[0] + k[0] * f, a[1] + k[1] * f, a[2] + k[2] * f];
    let mut psi = [C64::new(0.0, 0.0); 3];
    psi[start] = C64::new(1.0, 0.0);
    let mut path = Vec::with_capacity(steps + 1);
    path.push(psi);
    for _ in 0..steps {
        let k1 = deriv(&psi);
        let k2 = deriv(&axpy(&psi, &k1, dt / 2.0));
        let k3 = deriv(&axpy(&psi, &k2, dt / 2.0));
        let k4 = deriv(&axpy(&psi, &k3, dt));
        for r in 0..3 {
            psi[r] += (k1[r] + k2[r] * 2.0 + k3[r] * 2.0 + k4[r]) * (dt / 6.0);
        }
        path.push(psi);
    }
    path
}

fn norm_sqr(psi: &[C64; 3]) -> f64 {
    psi.iter().map(|a| a.norm_sqr()).sum()
}

/// First grid index at which the unnormalized norm drops below `r`.
fn jump_index(norms: &[f64], r: f64) -> Option<usize> {
    let k = norms.partition_point(|&n| n >= r);
    (k < norms.len()).then_some(k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloOutcome {
    pub trajectories: usize,
    pub zeno: ZenoOutcome,
    /// Mean final |0> population over all trajectories, jumps included.
    pub unconditional_population: f64,
}

pub const MC_STEPS: usize = 4000;

/// Quantum-jump trajectories per neighbour. Between jumps the state follows
/// the no-jump evolution (RK4 on a fixed grid); a jump happens when the
/// squared norm falls below a uniform draw and returns the atom to |1>.
/// The first draw of trajectory k is stratified into `[k, k+1)/N`.
/// Trajectory k of neighbour i uses ChaCha stream `i·2³² + k` of `seed`.
pub fn zeno_monte_carlo(p: &ZenoParams, trajectories: usize, seed: u64) -> Result<MonteCarloOutcome> {
    p.check()?;
    if trajectories == 0 {
        return Err(PhysicsError::Invalid("no trajectories".into()));
    }
    let steps = MC_STEPS;
    let mut neighbours = Vec::new();
    let mut population = 1.0;
    for (i, &j) in p.neighbour_couplings().iter().enumerate() {
        let from0 = rk4_path(j, p, 0, steps);
        let from1 = rk4_path(j, p, 1, steps);
        let norms0: Vec<f64> = from0.iter().map(norm_sqr).collect();
        let norms1: Vec<f64> = from1.iter().map(norm_sqr).collect();
        let results: Vec<(bool, f64)> = (0..trajectories)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(((i as u64) << 32) | k as u64);
                let r = (k as f64 + rng.gen::<f64>()) / trajectories as f64;
                let Some(mut t) = jump_index(&norms0, r) else {
                    let psi = from0[steps];
                    return (true, psi[0].norm_sqr() / norms0[steps]);
                };
                loop {
                    let left = steps - t;
                    let r: f64 = rng.gen();
                    match jump_index(&norms1[..=left], r) {
                        Some(k) if k > 0 => t += k,
                        Some(_) => t += 1,
                        None => {
                            let psi = from1[left];
                            return (false, psi[0].norm_sqr() / norms1[left]);
                        }
                    }
                    if t >= steps {
                        // jumped at the final instant: the atom sits in |1>
                        return (false, 0.0);
                    }
                }
            })
            .collect();
        let kept: Vec<f64> = results.iter().filter(|r| r.0).map(|r| r.1).collect();
        let success = kept.len() as f64 / trajectories as f64;
        let fidelity = if kept.is_empty() {
            0.0
        } else {
            kept.iter().sum::<f64>() / kept.len() as f64
        };
        population *= results.iter().map(|r| r.1).sum::<f64>() / trajectories as f64;
        neighbours.push(NeighbourOutcome {
            coupling: j,
            fidelity,
            success,
        });
    }
    Ok(MonteCarloOutcome {
        trajectories,
        zeno: ZenoOutcome::from_neighbours(neighbours),
        unconditional_population: population,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub omega: f64,
    pub fidelity: f64,
    pub success: f64,
}

pub fn zeno_sweep(base: &ZenoParams, omegas: &[f64]) -> Result<Vec<SweepPoint>> {
    omegas
        .iter()
        .map(|&omega| {
            let out = zeno_initialize(&ZenoParams { omega, ..*base })?;
            Ok(SweepPoint {
                omega,
                fidelity: out.fidelity,
                success: out.success,
            })
        })
        .collect()
}

/// Smallest swept Ω from which F stays above `level`.
pub fn zeno_threshold(sweep: &[SweepPoint], level: f64) -> Option<f64> {
    let k = sweep
        .iter()
        .rposition(|p| p.fidelity <= level)
        .map_or(0, |k| k + 1);
    sweep.get(k).map(|p| p.omega)
}

pub fn sweep_csv(sweep: &[SweepPoint]) -> String {
    let mut out = format!("{ZENO_HEADER}\n");
    for p in sweep {
        out.push_str(&format!("{},{:.12},{:.12}\n", p.omega, p.fidelity, p.success));
    }
    out
}
