//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A point of the wrong kind was handed to a space (e.g. a discrete
    /// index where a Euclidean vector was expected).
    #[error("point kind `{got}` does not belong to space `{space}`")]
    PointSpaceMismatch { space: &'static str, got: &'static str },

    /// A point of the right kind but with invalid data (coordinate out of
    /// range, wrong dimension, index out of bounds).
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("k = {k} out of range for sample size n = {n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("subspace predicate selected no support points")]
    EmptySubspace,

    /// Witness description does not match the instance it is applied to.
    #[error("witness incompatible with instance: {0}")]
    WitnessMismatch(String),

    /// Exact search asked for an instance above the exhaustive bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("rows come from problem `{got}`, expected `{expected}`")]
    WrongProblem { expected: String, got: String },

    #[error("need at least {need} result rows, got {got}")]
    NotEnoughRows { need: usize, got: usize },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
