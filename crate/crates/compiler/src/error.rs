use glq_core::CoreError;
use glq_sim::SimError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Sim(#[from] SimError),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no QUBITS header")]
    NoHeader,

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("layout: {0}")]
    Layout(String),

    #[error("routing: {0}")]
    Routing(String),

    #[error("qubits {0} and {1} sit on different register rows; cross-row gates are not supported")]
    CrossRow(usize, usize),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, CompileError>;
