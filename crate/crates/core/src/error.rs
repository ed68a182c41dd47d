use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NonHermitian(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("unsupported matrix size {0}")]
    SizeUnsupported(usize),

    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("invalid dimensions: dim_a = {0}, dim_b = {1}")]
    BadDims(usize, usize),

    #[error("expected subsystem dimension {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("frame is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("site {site} out of range for {n_sites} sites")]
    BadSite { site: usize, n_sites: usize },

    #[error("value {0} outside the admissible range")]
    OutOfRange(f64),

    #[error("system too large: {0} sites (max 10)")]
    TooLarge(usize),

    #[error("no factorizing field found in [{0}, {1}]")]
    NotFound(f64, f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
