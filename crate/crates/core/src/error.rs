use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("site ({col},{row}) outside {cols}x{rows} lattice")]
    SiteOutOfRange {
        col: usize,
        row: usize,
        cols: usize,
        rows: usize,
    },

    #[error("unknown gate name `{name}`; valid names are {valid}")]
    UnknownGate { name: String, valid: String },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("label `{label}` cannot be mapped under dialect `{dialect}`")]
    UnmappableLabel { label: String, dialect: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
