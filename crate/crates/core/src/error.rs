use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("invalid weight distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid width spec: {0}")]
    InvalidSpec(String),

    #[error("width measure `{0}` can only be evaluated by optimization")]
    UnsupportedMeasure(&'static str),

    #[error("invalid state times: {0}")]
    InvalidTimes(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("no positive three-frequency solution for tau/T = {0}")]
    NoPositiveSolution(f64),

    #[error("M = {0} >= pi/2: the minimum-bandwidth bound applies")]
    RevertToMinBandwidth(f64),

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unbounded linear program")]
    Unbounded,

    #[error("iteration limit reached after {0} iterations")]
    IterationLimit(usize),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("invalid kernel grid: {0}")]
    InvalidKernel(String),
}

impl Error {
    /// Internal failures (as opposed to bad input or an infeasible problem).
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::IterationLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
