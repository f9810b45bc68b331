//! Gaussian-process adaptive sampling for mapping a scalar field (such as
//! soil moisture) with a mobile robot.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! `*F64` / `*F32` aliases below cover the common cases.
//!
//! - [`gp`]: exact zero-mean GP regression with a squared-exponential kernel.
//! - [`fields`]: seeded synthetic ground-truth fields.
//! - [`planner`]: coarse bootstrap plus acquisition-driven sampling campaigns.
//! - [`metrics`]: campaign records, reconstruction, RMSE and batch summaries.
//! - [`io`]: CSV grid matrices and PGM/PPM heatmaps.

pub mod error;
pub mod fields;
mod geometry;
pub mod gp;
pub mod io;
pub mod metrics;
pub mod planner;
mod scalar;
pub mod seed;

pub use error::{Error, Result};
pub use geometry::{path_length, Observation, Point2};
pub use scalar::Scalar;

pub type Point2F64 = Point2<f64>;
pub type Point2F32 = Point2<f32>;
pub type ObservationF64 = Observation<f64>;
pub type GpHyperparamsF64 = gp::GpHyperparams<f64>;
pub type GpModelF64 = gp::GpModel<f64>;
pub type GpModelF32 = gp::GpModel<f32>;
pub type GridSpecF64 = fields::GridSpec<f64>;
pub type FieldF64 = fields::GroundTruthField<f64>;
pub type FieldF32 = fields::GroundTruthField<f32>;
pub type StoppingF64 = planner::StoppingCriteria<f64>;
pub type PlannerConfigF64 = planner::PlannerConfig<f64>;
pub type CampaignResultF64 = metrics::CampaignResult<f64>;
pub type CampaignResultF32 = metrics::CampaignResult<f32>;
