//! Batch experiment driver for `soilmap`: map suites, campaign sweeps,
//! persisted results, summaries and heatmaps.

pub mod error;
pub mod experiment;
pub mod persist;
pub mod plan;
pub mod render;

pub use error::{CliError, Result};
pub use experiment::{run_experiment, summarize_dir, RunReport};
pub use plan::ExperimentPlan;
