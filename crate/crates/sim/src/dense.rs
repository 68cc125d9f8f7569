use glq_core::{LatticeGeometry, PulseOp, PulseProgram, Unitary2, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SimError};
use crate::hybrid::check_program;
use crate::kernel;
use crate::record::{MeasurementRecord, SiteOutcome};

pub const DENSE_MAX_SITES: usize = 22;

/// Brute-force statevector over every lattice site. Site `i` in row-major
/// order is bit `i` of the basis index.
#[derive(Debug, Clone)]
pub struct DenseState {
    geometry: LatticeGeometry,
    amps: Vec<C64>,
    rng: ChaCha8Rng,
}

impl DenseState {
    pub fn new(geometry: LatticeGeometry, seed: u64) -> Result<Self> {
        let n = geometry.num_sites();
        if n > DENSE_MAX_SITES {
            return Err(SimError::DenseTooLarge {
                sites: n,
                cap: DENSE_MAX_SITES,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self {
            geometry,
            amps,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn from_amplitudes(geometry: LatticeGeometry, amps: Vec<C64>, seed: u64) -> Result<Self> {
        let mut s = Self::new(geometry, seed)?;
        if amps.len() != s.amps.len() {
            return Err(SimError::Invalid(format!(
                "expected {} amplitudes, got {}",
                s.amps.len(),
                amps.len()
            )));
        }
        s.amps = amps;
        Ok(s)
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geometry
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Restart sampling from `seed`, on ChaCha stream `stream`.
    pub fn reseed(&mut self, seed: u64, stream: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.rng.set_stream(stream);
    }

    pub fn norm(&self) -> f64 {
        kernel::norm_sqr(&self.amps).sqrt()
    }

    pub fn run(&mut self, program: &PulseProgram) -> Result<Vec<MeasurementRecord>> {
        check_program(&self.geometry, program)?;
        let mut records = Vec::new();
        for (i, op) in program.ops.iter().enumerate() {
            if let Some(r) = self.apply(op, i) {
                records.push(r);
            }
        }
        Ok(records)
    }

    pub fn apply(&mut self, op: &PulseOp, op_index: usize) -> Option<MeasurementRecord> {
        let g = self.geometry;
        match *op {
            PulseOp::RamanRotate { u, .. } => {
                for s in op.single_sites(&g) {
                    kernel::apply_1q(&mut self.amps, g.index(s), &u);
                }
            }
            PulseOp::InitPointer { site } => {
                kernel::apply_1q(&mut self.amps, g.index(site), &Unitary2::pauli_x());
            }
            PulseOp::HSwap { .. } | PulseOp::VSwap { .. } => {
                for (a, b) in op.site_pairs(&g) {
                    kernel::swap_bits(&mut self.amps, g.index(a), g.index(b));
                }
            }
            PulseOp::VControlled { u, .. } | PulseOp::HControlled { u, .. } => {
                for (c, t) in op.site_pairs(&g) {
                    kernel::apply_controlled(&mut self.amps, g.index(c), g.index(t), &u);
                }
            }
            PulseOp::MeasureAuxAlternate { .. } => {
                let mut outcomes = Vec::new();
                for s in op.single_sites(&g) {
                    let draw: f64 = self.rng.gen();
                    let bit = g.index(s);
                    let p0 = kernel::prob_zero(&self.amps, bit).min(1.0);
                    let outcome: u8 = if draw < p0 { 0 } else { 1 };
                    let p = if outcome == 0 { p0 } else { (1.0 - p0).max(0.0) };
                    kernel::project_in_place(&mut self.amps, bit, outcome as usize, p);
                    outcomes.push(SiteOutcome {
                        site: s,
                        outcome,
                        probability: p,
                    });
                }
                return Some(MeasurementRecord { op_index, outcomes });
            }
        }
        None
    }
}

/// Run `program` from all-zero on the dense backend.
pub fn dense_run(
    geometry: LatticeGeometry,
    program: &PulseProgram,
    seed: u64,
) -> Result<(DenseState, Vec<MeasurementRecord>)> {
    let mut s = DenseState::new(geometry, seed)?;
    let records = s.run(program)?;
    Ok((s, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use glq_core::{Parity, RowSet, SitePosition};

    #[test]
    fn vswap_moves_excitation() {
        let g = LatticeGeometry::new(2, 2).unwrap();
        let mut s = DenseState::new(g, 0).unwrap();
        s.apply(
            &PulseOp::InitPointer {
                site: SitePosition::new(0, 1),
            },
            0,
        );
        s.apply(&PulseOp::VSwap { parity: Parity::Even }, 1);
        assert_eq!(s.amplitudes()[0b0001], C64::new(1.0, 0.0));
    }

    #[test]
    fn hswap_is_a_permutation() {
        let g = LatticeGeometry::new(2, 2).unwrap();
        let amps: Vec<C64> = (0..16).map(|i| C64::new(i as f64, 0.0)).collect();
        let mut s = DenseState::from_amplitudes(g, amps, 0).unwrap();
        s.apply(
            &PulseOp::HSwap {
                rows: RowSet::Register,
                parity: Parity::Even,
            },
            0,
        );
        // bits 0 and 1 exchanged
        assert_eq!(s.amplitudes()[0b01], C64::new(2.0, 0.0));
        assert_eq!(s.amplitudes()[0b10], C64::new(1.0, 0.0));
        assert_eq!(s.amplitudes()[0b1101], C64::new(14.0, 0.0));
    }

    #[test]
    fn refuses_oversized_lattice() {
        let g = LatticeGeometry::new(12, 2).unwrap();
        let err = DenseState::new(g, 0).unwrap_err();
        assert!(err.to_string().contains("22"));
    }
}
