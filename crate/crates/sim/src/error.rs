use glq_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("op {op_index}: cluster of {size} qubits exceeds limit of {max}")]
    ClusterOverflow {
        op_index: usize,
        size: usize,
        max: usize,
    },

    #[error("dense backend limited to {cap} sites, lattice has {sites}")]
    DenseTooLarge { sites: usize, cap: usize },

    #[error("geometry mismatch: {0} vs {1}")]
    GeometryMismatch(String, String),

    #[error("program not executable: {0}")]
    Invalid(String),

    #[error("snapshot line {line}: {message}")]
    Snapshot { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, SimError>;
