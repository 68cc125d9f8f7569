//! Physics behind the lattice: Bose-Hubbard couplings and their spin-model
//! limit, gate durations, superlattice beams and Zeno-protected pointer
//! initialization. Energies are in recoil units, lengths in wavelengths,
//! and hbar = 1.

pub mod bose_hubbard;
pub mod couplings;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod superlattice;
pub mod zeno;

pub use bose_hubbard::{perturbation_check, propagator_error, Frame, TwoSiteModel, DEFAULT_CUTOFF};
pub use couplings::{
    collision_u, couplings_table, effective_couplings, tunnelling_j, BhParams, SpinCouplings,
};
pub use error::{PhysicsError, Result};
pub use gates::{gate_time, GateTarget, GateTiming};
pub use superlattice::{
    harmonicity_report, superlattice_decompose, Beam, Decomposition, LaserConfig, OffsetPattern,
};
pub use zeno::{zeno_initialize, zeno_monte_carlo, zeno_sweep, zeno_threshold, ZenoOutcome, ZenoParams};
