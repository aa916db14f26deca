use thiserror::Error;

/// Failure modes shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid slant: {0}")]
    InvalidSlant(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid sampling set: {0}")]
    InvalidSamplingSet(String),
    #[error("near-singular section: smallest eigenvalue {min_eig:.3e} at tolerance {tol:.3e}")]
    NearSingular { min_eig: f64, tol: f64 },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
