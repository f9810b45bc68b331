use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gram matrix is not positive definite (failed at row {row} with jitter {jitter:e})")]
    FactorizationFailure { row: usize, jitter: f64 },

    #[error("cannot fit a gaussian process to an empty dataset")]
    EmptyDataset,

    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparams(String),

    #[error("point ({x}, {y}) lies outside the domain [0, {side}]^2")]
    OutOfBounds { x: f64, y: f64, side: f64 },

    #[error("no candidate locations available for selection")]
    EmptyCandidates,

    #[error("grid shapes differ: {left} vs {right} nodes per side")]
    ShapeMismatch { left: usize, right: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
