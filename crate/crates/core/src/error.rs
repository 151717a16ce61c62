use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FioError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("frequency content exceeds the Nyquist bound: {0}")]
    AboveNyquist(String),
    #[error("boundary mass {mass:.3e} exceeds tolerance {tol:.1e}")]
    BoundaryMass { mass: f64, tol: f64 },
    #[error("invalid amplitude: {0}")]
    InvalidAmplitude(String),
    #[error("invalid phase: {0}")]
    InvalidPhase(String),
    #[error("probe at the singular origin: {0}")]
    SingularProbe(String),
    #[error("unknown catalog entry: {0}")]
    UnknownCatalog(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("threshold formula defect: {0}")]
    ThresholdDefect(String),
    #[error("decomposition error: {0}")]
    Decomposition(String),
    #[error("non-finite operator output at grid index {index}")]
    NonFinite { index: usize },
    #[error("work estimate {work:.3e} exceeds budget {budget:.3e}")]
    Budget { work: f64, budget: f64 },
    #[error("invalid fit input: {0}")]
    Fit(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, FioError>;

impl From<std::io::Error> for FioError {
    fn from(e: std::io::Error) -> Self {
        FioError::Io(e.to_string())
    }
}
