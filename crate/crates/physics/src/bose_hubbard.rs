//! Exact two-site, two-species Bose-Hubbard dynamics compared with the
//! second-order spin model.

use crate::couplings::{effective_couplings, BhParams, SpinCouplings};
use crate::error::{PhysicsError, Result};
use crate::linalg::{kron, pauli, propagator, spectral_norm, CMatrix, C64};

pub const DEFAULT_CUTOFF: usize = 3;
const CUTOFF_TOL: f64 = 1e-10;

/// Occupations `[n1a, n1b, n2a, n2b]`.
pub type Occupation = [usize; 4];

/// Qubit basis `|s1 s2>` (0 = species a, 1 = species b), index `2 s1 + s2`.
pub const QUBIT_STATES: [Occupation; 4] = [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]];

#[derive(Debug, Clone)]
pub struct TwoSiteModel {
    pub basis: Vec<Occupation>,
    pub hamiltonian: CMatrix,
    /// Interaction energy of each basis state.
    pub diagonal: Vec<f64>,
    /// Tunnelling part alone.
    pub hopping: CMatrix,
    pub qubit_index: [usize; 4],
}

impl TwoSiteModel {
    /// Two atoms in total, at most `cutoff` per site and species.
    pub fn new(p: &BhParams, cutoff: usize) -> Result<Self> {
        p.check()?;
        if cutoff < 1 {
            return Err(PhysicsError::Invalid("Fock cutoff must be at least 1".into()));
        }
        let mut basis = Vec::new();
        for n1a in 0..=cutoff {
            for n1b in 0..=cutoff {
                for n2a in 0..=cutoff {
                    for n2b in 0..=cutoff {
                        if n1a + n1b + n2a + n2b == 2 {
                            basis.push([n1a, n1b, n2a, n2b]);
                        }
                    }
                }
            }
        }
        let dim = basis.len();
        let onsite = |na: usize, nb: usize| {
            let (na, nb) = (na as f64, nb as f64);
            0.5 * p.uaa * na * (na - 1.0) + 0.5 * p.ubb * nb * (nb - 1.0) + p.uab * na * nb
        };
        let diagonal: Vec<f64> = basis
            .iter()
            .map(|n| onsite(n[0], n[1]) + onsite(n[2], n[3]))
            .collect();
        let mut hopping = CMatrix::zeros(dim, dim);
        for (k, n) in basis.iter().enumerate() {
            // a†_{1s} a_{2s} and its conjugate, s = a (modes 0,2) and b (modes 1,3)
            for (from, to, j) in [(2, 0, p.ja), (0, 2, p.ja), (3, 1, p.jb), (1, 3, p.jb)] {
                if n[from] == 0 || n[to] == cutoff {
                    continue;
                }
                let mut m = *n;
                let amp = ((m[from] * (m[to] + 1)) as f64).sqrt();
                m[from] -= 1;
                m[to] += 1;
                let r = basis.iter().position(|b| *b == m).expect("state in basis");
                hopping[(r, k)] += C64::new(-j * amp, 0.0);
            }
        }
        let hamiltonian = &hopping
            + CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                dim,
                diagonal.iter().map(|&e| C64::new(e, 0.0)),
            ));
        let qubit_index = QUBIT_STATES.map(|q| basis.iter().position(|b| *b == q).expect("qubit state"));
        Ok(Self {
            basis,
            hamiltonian,
            diagonal,
            hopping,
            qubit_index,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn project(&self, m: &CMatrix) -> CMatrix {
        CMatrix::from_fn(4, 4, |r, c| m[(self.qubit_index[r], self.qubit_index[c])])
    }

    /// First-order Schrieffer-Wolff generator between the singly occupied
    /// manifold and the doubly occupied states.
    pub fn sw_generator(&self) -> CMatrix {
        let dim = self.dim();
        let mut s = CMatrix::zeros(dim, dim);
        for &m in &self.qubit_index {
            for k in 0..dim {
                if self.qubit_index.contains(&k) {
                    continue;
                }
                let v = self.hopping[(m, k)];
                if v.norm() > 0.0 {
                    let x = v / (self.diagonal[m] - self.diagonal[k]);
                    s[(m, k)] = x;
                    s[(k, m)] = -x.conj();
                }
            }
        }
        s
    }
}

/// `lambda1 zz + lambda2 (xx + yy) + (bz/2)(z1 + z2) + offset` on one bond.
/// A site in a chain has two bonds, so one bond carries half the chain's `bz`.
pub fn effective_hamiltonian(c: &SpinCouplings, offset: f64) -> CMatrix {
    let (i, x, y, z) = (pauli('i'), pauli('x'), pauli('y'), pauli('z'));
    let r = |v: f64| C64::new(v, 0.0);
    kron(&z, &z) * r(c.lambda1)
        + (kron(&x, &x) + kron(&y, &y)) * r(c.lambda2)
        + (kron(&z, &i) + kron(&i, &z)) * r(c.bz / 2.0)
        + kron(&i, &i) * r(offset)
}

/// Second-order energy shift common to the whole qubit manifold.
pub fn manifold_offset(p: &BhParams) -> f64 {
    let (ja2, jb2) = (p.ja * p.ja, p.jb * p.jb);
    -ja2 / p.uaa - jb2 / p.ubb - (ja2 + jb2) / (2.0 * p.uab)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Project the bare propagator onto the qubit states.
    Bare,
    /// Rotate by the first-order Schrieffer-Wolff transform before projecting.
    Dressed,
}

/// Spectral-norm distance between the projected exact propagator and the
/// effective one, without a cutoff check.
pub fn propagator_error(p: &BhParams, t: f64, cutoff: usize, frame: Frame) -> Result<f64> {
    let model = TwoSiteModel::new(p, cutoff)?;
    let mut exact = propagator(&model.hamiltonian, t);
    if frame == Frame::Dressed {
        let s = model.sw_generator();
        exact = crate::linalg::expm(&s) * exact * crate::linalg::expm(&(-s));
    }
    let eff = propagator(
        &effective_hamiltonian(&effective_couplings(p)?, manifold_offset(p)),
        t,
    );
    Ok(spectral_norm(&(model.project(&exact) - eff)))
}

/// [`propagator_error`] with a check that doubling the cutoff changes the
/// result by less than 1e-10.
pub fn perturbation_check(p: &BhParams, t: f64, cutoff: usize, frame: Frame) -> Result<f64> {
    let e = propagator_error(p, t, cutoff, frame)?;
    let e2 = propagator_error(p, t, 2 * cutoff, frame)?;
    if (e - e2).abs() > CUTOFF_TOL {
        return Err(PhysicsError::Cutoff {
            cutoff,
            change: (e - e2).abs(),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        let p = BhParams::symmetric(0.05, 1.0);
        // two bosons in four modes: C(5,2) = 10
        assert_eq!(TwoSiteModel::new(&p, 2).unwrap().dim(), 10);
        assert_eq!(TwoSiteModel::new(&p, 3).unwrap().dim(), 10);
        assert_eq!(TwoSiteModel::new(&p, 1).unwrap().dim(), 6);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let p = BhParams {
            ja: 0.07,
            jb: 0.03,
            uaa: 1.0,
            ubb: 1.3,
            uab: 0.8,
        };
        let m = TwoSiteModel::new(&p, 3).unwrap();
        assert!(spectral_norm(&(&m.hamiltonian - m.hamiltonian.adjoint())) < 1e-15);
    }

    #[test]
    fn cutoff_one_is_flagged() {
        let p = BhParams::symmetric(0.05, 1.0);
        assert!(matches!(
            perturbation_check(&p, std::f64::consts::PI, 1, Frame::Dressed),
            Err(PhysicsError::Cutoff { .. })
        ));
    }
}
