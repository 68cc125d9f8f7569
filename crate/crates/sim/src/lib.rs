//! Lattice simulators for global pulse programs.
//!
//! [`HybridState`] keeps classical sites as bits, unentangled sites as
//! two-component vectors and only groups entangled sites into shared
//! statevector clusters. [`DenseState`] is the brute-force oracle.

pub mod dense;
pub mod error;
pub mod hybrid;
pub mod kernel;
pub mod random;
pub mod record;
pub mod snapshot;

pub use dense::{dense_run, DenseState, DENSE_MAX_SITES};
pub use error::{Result, SimError};
pub use hybrid::{Cluster, HybridState, SiteContent, DEFAULT_MAX_CLUSTER_QUBITS};
pub use record::{records_to_csv, MeasurementRecord, SiteOutcome};
pub use snapshot::{parse_snapshot, snapshot};

use glq_core::{LatticeGeometry, PulseProgram};

pub fn init_state(geometry: LatticeGeometry, max_cluster_qubits: usize, seed: u64) -> HybridState {
    HybridState::new(geometry, max_cluster_qubits, seed)
}

/// Run `program` from all-zero on the hybrid backend.
pub fn run(
    program: &PulseProgram,
    max_cluster_qubits: usize,
    seed: u64,
) -> Result<(HybridState, Vec<MeasurementRecord>)> {
    let mut s = HybridState::new(program.geometry, max_cluster_qubits, seed);
    let records = s.run(program)?;
    Ok((s, records))
}

/// `|<hybrid|dense>|^2` after expanding the hybrid state.
pub fn fidelity_hybrid_dense(h: &HybridState, d: &DenseState) -> Result<f64> {
    if h.geometry() != d.geometry() {
        return Err(SimError::GeometryMismatch(
            h.geometry().to_string(),
            d.geometry().to_string(),
        ));
    }
    let a = h.to_dense_amplitudes()?;
    Ok(kernel::overlap_fidelity(&a, d.amplitudes()))
}

pub fn fidelity_dense(a: &DenseState, b: &DenseState) -> Result<f64> {
    if a.geometry() != b.geometry() {
        return Err(SimError::GeometryMismatch(
            a.geometry().to_string(),
            b.geometry().to_string(),
        ));
    }
    Ok(kernel::overlap_fidelity(a.amplitudes(), b.amplitudes()))
}
