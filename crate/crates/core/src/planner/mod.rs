//! Adaptive sampling planner.

mod acquisition;
mod campaign;
mod policy;

pub use acquisition::{acquisition_a1, acquisition_a2};
pub use campaign::{
    initial_coarse_sample, run_campaign, select_index, select_next, CandidateGrid, CoarseGrid,
    PlannerConfig, PlannerState, Selection, TruthSource, REVISIT_RADIUS,
};
pub use policy::{Rule, SamplingPolicy, StopReason, StoppingCriteria, DEFAULT_TOP_K};
