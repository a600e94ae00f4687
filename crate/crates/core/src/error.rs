use thiserror::Error;

/// Errors raised by the cloning workbench.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(usize),

    #[error("non-finite amplitude encountered")]
    NonFinite,

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("vectors are not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("projection has zero probability")]
    ZeroProjection,

    #[error("state is not a Cerf state (re-expansion residual {0:e})")]
    NotCerfState(f64),

    #[error("channel is not symmetric: disturbances differ by {0:e}")]
    NonSymmetricChannel(f64),

    #[error("probabilities do not sum to one (sum = {0})")]
    NotAProbability(f64),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("no fidelity crossing found in the admissible range")]
    NoCrossing,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
