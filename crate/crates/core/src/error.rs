use thiserror::Error;

/// Errors reported by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its admissible range (e.g. |rho| >= 1, sigma_d <= 0).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An evaluation was requested outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A forecast referenced periods before the start of the recorded history.
    #[error("insufficient history: forecast at t={t} needs observations in [{lo}, {hi}], series has length {len}")]
    OutOfHistory { t: usize, lo: i64, hi: i64, len: usize },

    /// Inconsistent or incomplete run configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
