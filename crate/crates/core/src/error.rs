use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("eigensolver did not converge (dim {dim}, norm {norm:e})")]
    NoConvergence { dim: usize, norm: f64 },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("trace {trace} is not 1")]
    TraceMismatch { trace: f64 },
    #[error("dimension {dim} exceeds the limit of {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("support condition violated: {0}")]
    Support(String),
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown function `{name}`; valid names: {valid}")]
    UnknownFunction { name: String, valid: String },
    #[error("malformed function spec `{0}`")]
    BadSpec(String),
    #[error(
        "quadrature tolerance not reached after {panels} panels \
         (estimate {estimate}, error {error:e})"
    )]
    Quadrature { estimate: f64, error: f64, panels: usize },
}

impl Error {
    /// True for failures of a numerical routine on valid input, as opposed to
    /// rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::Quadrature { .. })
    }
}

pub type Result<T> = core::result::Result<T, Error>;
