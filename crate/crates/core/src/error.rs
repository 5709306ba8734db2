use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("degree {degree} exceeds supported maximum {max}")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("solution set is infinite")]
    InfiniteCount,

    #[error("exhaustive enumeration infeasible: {0}")]
    Infeasible(String),

    #[error("no witness found although one must exist: {0}")]
    WitnessNotFound(String),

    #[error("cannot fit scaling law: {0}")]
    NoFit(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Exit code the CLI maps this error to: 1 for validation problems,
    /// 2 for broken internal invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::WitnessNotFound(_) => 2,
            _ => 1,
        }
    }
}
