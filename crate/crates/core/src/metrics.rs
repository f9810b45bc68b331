//! Campaign records, GP map reconstruction and batch summaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{GridSpec, GroundTruthField};
use crate::geometry::path_length;
use crate::gp::{GpHyperparams, GpModel};
use crate::planner::{Rule, SamplingPolicy, StopReason, StoppingCriteria};
use crate::{Observation, Point2, Scalar};

/// Snapshot taken after the bootstrap (iteration 0) and after every
/// iterative sample. Variances are over the candidate grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct IterationRecord<T> {
    pub iteration: usize,
    pub location: Option<Point2<T>>,
    pub score: Option<T>,
    pub value: Option<T>,
    pub max_variance: T,
    pub avg_variance: T,
    pub cumulative_distance: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CampaignResult<T> {
    pub grid: GridSpec<T>,
    pub hyperparams: GpHyperparams<T>,
    pub policy: SamplingPolicy,
    pub stopping: StoppingCriteria<T>,
    pub stop_reason: StopReason,
    pub sample_log: Vec<Observation<T>>,
    pub trajectory: Vec<Point2<T>>,
    pub per_iteration: Vec<IterationRecord<T>>,
    pub final_reconstruction: Vec<T>,
    pub final_variance_grid: Vec<T>,
}

impl<T: Scalar> CampaignResult<T> {
    pub fn total_distance(&self) -> T {
        self.per_iteration
            .last()
            .map(|r| r.cumulative_distance)
            .unwrap_or_else(T::zero)
    }

    pub fn sample_count(&self) -> usize {
        self.sample_log.len()
    }

    pub fn iterative_samples(&self) -> usize {
        self.per_iteration.len().saturating_sub(1)
    }

    pub fn final_max_variance(&self) -> T {
        self.per_iteration.last().map(|r| r.max_variance).unwrap_or_else(T::one)
    }

    pub fn final_avg_variance(&self) -> T {
        self.per_iteration.last().map(|r| r.avg_variance).unwrap_or_else(T::one)
    }
}

/// `M · c_sample + Σ legs`, with travel cost equal to Euclidean distance.
pub fn total_cost<T: Scalar>(result: &CampaignResult<T>, c_sample: T) -> T {
    T::of_usize(result.sample_log.len()) * c_sample + path_length(&result.trajectory)
}

/// Predictive mean and variance evaluated at every node of a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Reconstruction<T> {
    pub spec: GridSpec<T>,
    pub mean: Vec<T>,
    pub variance: Vec<T>,
}

pub fn reconstruct<T: Scalar>(
    dataset: &[Observation<T>],
    spec: GridSpec<T>,
    h: GpHyperparams<T>,
) -> Result<Reconstruction<T>> {
    let model = GpModel::fit(dataset, h)?;
    let (mean, variance) = model.predict(&spec.nodes()).into_iter().map(|p| (p.mean, p.variance)).unzip();
    Ok(Reconstruction { spec, mean, variance })
}

/// Root-mean-square error between two equally sized grids.
pub fn rmse_values<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::ShapeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let sq = a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y));
    Ok((sq / T::of_usize(a.len())).sqrt())
}

pub fn rmse<T: Scalar>(reconstruction: &Reconstruction<T>, truth: &GroundTruthField<T>) -> Result<T> {
    if reconstruction.spec != truth.spec {
        return Err(Error::ShapeMismatch {
            left: reconstruction.spec.resolution,
            right: truth.spec.resolution,
        });
    }
    rmse_values(&reconstruction.mean, &truth.values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Distance,
    Samples,
    MaxVariance,
    AvgVariance,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Distance, Metric::Samples, Metric::MaxVariance, Metric::AvgVariance];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Distance => "distance",
            Metric::Samples => "samples",
            Metric::MaxVariance => "max_variance",
            Metric::AvgVariance => "avg_variance",
        }
    }

    pub fn of<T: Scalar>(&self, r: &CampaignResult<T>) -> f64 {
        match self {
            Metric::Distance => r.total_distance().as_f64(),
            Metric::Samples => r.sample_count() as f64,
            Metric::MaxVariance => r.final_max_variance().as_f64(),
            Metric::AvgVariance => r.final_avg_variance().as_f64(),
        }
    }

    /// Whether a stopping rule directly pins this metric, in which case the
    /// group is flagged rather than plotted. Average variance is never pinned.
    pub fn conditioned_by<T: Scalar>(&self, stopping: &StoppingCriteria<T>) -> bool {
        match self {
            Metric::Distance => stopping.max_distance.is_some(),
            Metric::Samples => stopping.max_samples.is_some(),
            Metric::MaxVariance => stopping.variance_threshold.is_some(),
            Metric::AvgVariance => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub policy: Rule,
    pub size: f64,
    pub stopping: String,
    pub metric: Metric,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub n: usize,
    pub excluded: bool,
}

/// Mean and population standard deviation of each metric per
/// `(policy, size, stopping)` group. Rows are ordered by metric, policy,
/// size, then stopping configuration, independent of input order.
pub fn summarize_batch<T: Scalar>(results: &[CampaignResult<T>]) -> Vec<SummaryRow> {
    struct Group<'a, T> {
        policy: Rule,
        size: f64,
        stopping: StoppingCriteria<T>,
        label: String,
        members: Vec<&'a CampaignResult<T>>,
    }
    let mut groups: Vec<Group<'_, T>> = Vec::new();
    for r in results {
        let label = r.stopping.label();
        let size = r.grid.side.as_f64();
        match groups
            .iter_mut()
            .find(|g| g.policy == r.policy.rule && g.size == size && g.label == label)
        {
            Some(g) => g.members.push(r),
            None => groups.push(Group {
                policy: r.policy.rule,
                size,
                stopping: r.stopping,
                label,
                members: vec![r],
            }),
        }
    }
    groups.sort_by(|a, b| {
        a.policy
            .cmp(&b.policy)
            .then(a.size.total_cmp(&b.size))
            .then_with(|| stopping_order(&a.stopping, &b.stopping))
            .then_with(|| a.label.cmp(&b.label))
    });

    let mut rows = Vec::new();
    for metric in Metric::ALL {
        for g in &groups {
            let xs: Vec<f64> = g.members.iter().map(|r| metric.of(*r)).collect();
            let (mean, std) = mean_std(&xs);
            rows.push(SummaryRow {
                policy: g.policy,
                size: g.size,
                stopping: g.label.clone(),
                metric,
                mean,
                std,
                n: xs.len(),
                excluded: metric.conditioned_by(&g.stopping),
            });
        }
    }
    rows
}

/// Sample budgets first, then distance budgets, then variance thresholds,
/// each ascending.
fn stopping_order<T: Scalar>(a: &StoppingCriteria<T>, b: &StoppingCriteria<T>) -> std::cmp::Ordering {
    fn key<T: Scalar>(s: &StoppingCriteria<T>) -> (u8, f64) {
        if let Some(n) = s.max_samples {
            (0, n as f64)
        } else if let Some(d) = s.max_distance {
            (1, d.as_f64())
        } else {
            (2, s.variance_threshold.map_or(0.0, |v| v.as_f64()))
        }
    }
    let (ka, kb) = (key(a), key(b));
    ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
