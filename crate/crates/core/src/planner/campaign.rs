//! Two-phase sampling campaign: coarse bootstrap followed by acquisition-driven
//! iterative sampling until a stopping criterion fires.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::acquisition::{acquisition_a1, acquisition_a2};
use super::policy::{Rule, SamplingPolicy, StopReason, StoppingCriteria};
use crate::error::{Error, Result};
use crate::fields::{GridSpec, GroundTruthField};
use crate::gp::{CandidatePosterior, GpHyperparams, GpModel};
use crate::metrics::{reconstruct, CampaignResult, IterationRecord};
use crate::{Observation, Point2, Scalar};

/// Candidates closer than this to an existing sample are never reselected.
pub const REVISIT_RADIUS: f64 = 1e-6;

/// Anything that can be probed for the field value at a point.
pub trait TruthSource<T> {
    fn measure(&self, p: &Point2<T>) -> Result<T>;
}

impl<T: Scalar> TruthSource<T> for GroundTruthField<T> {
    fn measure(&self, p: &Point2<T>) -> Result<T> {
        self.sample(p)
    }
}

/// Row-major `rows × columns` lattice of bootstrap waypoints.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarseGrid<T> {
    pub points: Vec<Point2<T>>,
    pub columns: usize,
}

impl<T: Scalar> CoarseGrid<T> {
    /// `k × k` lattice of cell centers over `[0, side]²`.
    pub fn cell_centers(side: T, k: usize) -> Self {
        let kk = T::of_usize(k);
        let half = T::of(0.5);
        let points = (0..k)
            .flat_map(|j| (0..k).map(move |i| (i, j)))
            .map(|(i, j)| {
                Point2::new(
                    side * (T::of_usize(i) + half) / kk,
                    side * (T::of_usize(j) + half) / kk,
                )
            })
            .collect();
        Self { points, columns: k }
    }

    /// Boustrophedon order: even rows left to right, odd rows right to left.
    pub fn serpentine(&self) -> Vec<Point2<T>> {
        let cols = self.columns.max(1);
        self.points
            .chunks(cols)
            .enumerate()
            .flat_map(|(r, row)| {
                let mut row = row.to_vec();
                if r % 2 == 1 {
                    row.reverse();
                }
                row
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PlannerState<T> {
    pub dataset: Vec<Observation<T>>,
    pub current_location: Point2<T>,
    pub cumulative_distance: T,
    pub iteration: usize,
    /// Start pose followed by every visited sample location.
    pub trajectory: Vec<Point2<T>>,
}

impl<T: Scalar> PlannerState<T> {
    pub fn at(start: Point2<T>) -> Self {
        Self {
            dataset: Vec::new(),
            current_location: start,
            cumulative_distance: T::zero(),
            iteration: 0,
            trajectory: vec![start],
        }
    }

    /// Travels to `p` and records the measurement taken there.
    pub fn visit(&mut self, p: Point2<T>, value: T) {
        self.cumulative_distance += self.current_location.distance(&p);
        self.current_location = p;
        self.trajectory.push(p);
        self.dataset.push(Observation::new(p, value));
    }
}

/// Discretized domain over which acquisition is maximized.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateGrid<T> {
    pub points: Vec<Point2<T>>,
    pub d_max: T,
}

impl<T: Scalar> CandidateGrid<T> {
    /// Every `stride`-th node of `spec` along each axis (the far edge is
    /// always kept).
    pub fn from_spec(spec: &GridSpec<T>, stride: usize) -> Self {
        let stride = stride.max(1);
        let last = spec.resolution - 1;
        let axis: Vec<usize> = (0..spec.resolution)
            .filter(|i| i % stride == 0 || *i == last)
            .collect();
        let points = axis
            .iter()
            .flat_map(|&j| axis.iter().map(move |&i| (i, j)))
            .map(|(i, j)| spec.node(i, j))
            .collect();
        Self {
            points,
            d_max: spec.diagonal(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Visits the coarse lattice in serpentine order starting from `start`.
pub fn initial_coarse_sample<T: Scalar, S: TruthSource<T>>(
    truth: &S,
    grid: &CoarseGrid<T>,
    start: Point2<T>,
) -> Result<PlannerState<T>> {
    if grid.points.is_empty() {
        return Err(Error::Config("coarse grid must contain at least one point".into()));
    }
    let mut state = PlannerState::at(start);
    for p in grid.serpentine() {
        let value = truth.measure(&p)?;
        state.visit(p, value);
    }
    Ok(state)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Selection<T> {
    pub index: usize,
    pub score: T,
}

fn score<T: Scalar>(rule: Rule, variance: T, distance: T, d_max: T) -> T {
    match rule {
        Rule::Benchmark => variance,
        Rule::A1 | Rule::A1Randomized => acquisition_a1(variance, distance, d_max),
        Rule::A2 | Rule::A2Randomized => acquisition_a2(variance, distance, d_max),
    }
}

/// Picks a candidate index from per-candidate variances. Strict argmax with
/// lowest-index tie-break for deterministic rules; uniform choice among the
/// `top_k` best for randomized ones.
pub fn select_index<T: Scalar, R: Rng>(
    variances: &[T],
    eligible: &[bool],
    candidates: &CandidateGrid<T>,
    current: &Point2<T>,
    policy: &SamplingPolicy,
    rng: &mut R,
) -> Result<Selection<T>> {
    let scored = candidates
        .points
        .iter()
        .zip(variances)
        .enumerate()
        .filter(|(i, _)| eligible[*i])
        .map(|(i, (p, &v))| Selection {
            index: i,
            score: score(policy.rule, v, current.distance(p), candidates.d_max),
        });

    if policy.rule.is_randomized() {
        let mut all: Vec<Selection<T>> = scored.collect();
        if all.is_empty() {
            return Err(Error::EmptyCandidates);
        }
        let k = policy.top_k.max(1).min(all.len());
        let by_rank = |a: &Selection<T>, b: &Selection<T>| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.index.cmp(&b.index))
        };
        if k < all.len() {
            all.select_nth_unstable_by(k - 1, by_rank);
            all.truncate(k);
        }
        all.sort_by(by_rank);
        Ok(all[rng.gen_range(0..k)])
    } else {
        scored
            .fold(None, |best: Option<Selection<T>>, s| match best {
                Some(b) if !(s.score > b.score) => Some(b),
                _ => Some(s),
            })
            .ok_or(Error::EmptyCandidates)
    }
}

fn eligibility<T: Scalar>(candidates: &CandidateGrid<T>, sampled: &[Point2<T>]) -> Vec<bool> {
    let r2 = T::of(REVISIT_RADIUS * REVISIT_RADIUS);
    candidates
        .points
        .iter()
        .map(|c| sampled.iter().all(|s| c.distance_squared(s) > r2))
        .collect()
}

/// Next sample location given a fitted model of `state.dataset`.
pub fn select_next<T: Scalar, R: Rng>(
    state: &PlannerState<T>,
    model: &GpModel<T>,
    candidates: &CandidateGrid<T>,
    policy: &SamplingPolicy,
    rng: &mut R,
) -> Result<Point2<T>> {
    let variances: Vec<T> = model.predict(&candidates.points).iter().map(|p| p.variance).collect();
    let sampled: Vec<Point2<T>> = state.dataset.iter().map(|o| o.location).collect();
    let eligible = eligibility(candidates, &sampled);
    let sel = select_index(&variances, &eligible, candidates, &state.current_location, policy, rng)?;
    Ok(candidates.points[sel.index])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PlannerConfig<T> {
    /// Defaults to unit signal variance, `ℓ = side / 5`, `σₙ² = 1e-6`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperparams: Option<GpHyperparams<T>>,
    pub coarse_k: usize,
    pub start: Point2<T>,
    pub candidate_stride: usize,
}

impl<T: Scalar> Default for PlannerConfig<T> {
    fn default() -> Self {
        Self {
            hyperparams: None,
            coarse_k: 2,
            start: Point2::origin(),
            candidate_stride: 1,
        }
    }
}

impl<T: Scalar> PlannerConfig<T> {
    pub fn hyperparams_for(&self, spec: &GridSpec<T>) -> GpHyperparams<T> {
        self.hyperparams.unwrap_or_else(|| GpHyperparams::for_domain(spec.side))
    }
}

/// Runs one full campaign against a ground-truth field.
pub fn run_campaign<T: Scalar>(
    truth: &GroundTruthField<T>,
    policy: &SamplingPolicy,
    stopping: &StoppingCriteria<T>,
    config: &PlannerConfig<T>,
) -> Result<CampaignResult<T>> {
    stopping.validate()?;
    policy.validate()?;
    if config.coarse_k == 0 {
        return Err(Error::Config("coarse grid must be at least 1x1".into()));
    }
    let spec = truth.spec;
    let h = config.hyperparams_for(&spec);
    h.validate()?;
    let candidates = CandidateGrid::from_spec(&spec, config.candidate_stride);
    let mut posterior = CandidatePosterior::new(h, candidates.points.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(policy.rng_seed);

    let coarse = CoarseGrid::cell_centers(spec.side, config.coarse_k);
    let mut state = initial_coarse_sample(truth, &coarse, config.start)?;
    for o in &state.dataset {
        posterior.add(o.location)?;
    }
    let sampled: Vec<Point2<T>> = state.dataset.iter().map(|o| o.location).collect();
    let mut eligible = eligibility(&candidates, &sampled);
    let r2 = T::of(REVISIT_RADIUS * REVISIT_RADIUS);

    let (max_var, avg_var) = posterior.variance_summary();
    let mut log = vec![IterationRecord {
        iteration: 0,
        location: None,
        score: None,
        value: None,
        max_variance: max_var,
        avg_variance: avg_var,
        cumulative_distance: state.cumulative_distance,
    }];
    let mut reason = stopping.check(state.dataset.len(), state.cumulative_distance, max_var);

    while reason.is_none() {
        if !eligible.iter().any(|&e| e) {
            reason = Some(StopReason::CandidatesExhausted);
            break;
        }
        let variances = posterior.variances();
        let sel = select_index(
            &variances,
            &eligible,
            &candidates,
            &state.current_location,
            policy,
            &mut rng,
        )?;
        let next = candidates.points[sel.index];
        let value = truth.measure(&next)?;
        state.visit(next, value);
        state.iteration += 1;
        posterior.add(next)?;
        for (e, c) in eligible.iter_mut().zip(&candidates.points) {
            if *e && c.distance_squared(&next) <= r2 {
                *e = false;
            }
        }
        let (max_var, avg_var) = posterior.variance_summary();
        log.push(IterationRecord {
            iteration: state.iteration,
            location: Some(next),
            score: Some(sel.score),
            value: Some(value),
            max_variance: max_var,
            avg_variance: avg_var,
            cumulative_distance: state.cumulative_distance,
        });
        reason = stopping.check(state.dataset.len(), state.cumulative_distance, max_var);
    }

    // With every node as a candidate the cached solves already span the grid.
    let (mean, variance) = if config.candidate_stride <= 1 {
        let values: Vec<T> = state.dataset.iter().map(|o| o.value).collect();
        (posterior.means(&values)?, posterior.variances())
    } else {
        let recon = reconstruct(&state.dataset, spec, h)?;
        (recon.mean, recon.variance)
    };
    Ok(CampaignResult {
        grid: spec,
        hyperparams: h,
        policy: *policy,
        stopping: *stopping,
        stop_reason: reason.expect("loop exits only with a reason"),
        sample_log: state.dataset,
        trajectory: state.trajectory,
        per_iteration: log,
        final_reconstruction: mean,
        final_variance_grid: variance,
    })
}
