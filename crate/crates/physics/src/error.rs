use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhysicsError {
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("{0} must be positive")]
    NotPositive(&'static str),

    #[error("{0} is zero")]
    ZeroCoupling(&'static str),

    #[error("Fock cutoff {cutoff} is not converged: doubling it changes the result by {change:e}")]
    Cutoff { cutoff: usize, change: f64 },

    #[error("unsupported pattern `{0}`; supported: {1}")]
    UnsupportedPattern(String, String),

    #[error("harmonicity: {0}")]
    Harmonicity(String),

    #[error("invalid parameter: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, PhysicsError>;

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(PhysicsError::Negative { name, value })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(PhysicsError::NotPositive(name))
    }
}
