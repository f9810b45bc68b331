//! Exact Gaussian-process regression with a zero prior mean and a
//! squared-exponential kernel.

mod cholesky;
mod kernel;
mod model;
mod posterior;

pub use cholesky::{Cholesky, NotPositiveDefinite, JITTER_LADDER};
pub use kernel::{kernel, GpHyperparams};
pub use model::{GpModel, Prediction};
pub use posterior::CandidatePosterior;
