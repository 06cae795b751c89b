use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("inexact division")]
    InexactDivision,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("{what}: degree {degree} outside supported range {min}..={max}")]
    CapExceeded { what: &'static str, degree: u32, min: u32, max: u32 },
    #[error("curve is not smooth: {0}")]
    NotSmooth(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numeric non-convergence: {0}")]
    NonConvergence(String),
    #[error("empty polynomial")]
    EmptyPolynomial,
    #[error("exact coefficients required")]
    FloatCoefficients,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
