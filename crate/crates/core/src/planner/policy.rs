use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

pub const DEFAULT_TOP_K: usize = 5;

/// Acquisition rule used to pick the next sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Greedy maximum predictive variance, blind to travel cost.
    Benchmark,
    A1,
    A2,
    A1Randomized,
    A2Randomized,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::Benchmark,
        Rule::A1,
        Rule::A2,
        Rule::A1Randomized,
        Rule::A2Randomized,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::Benchmark => "benchmark",
            Rule::A1 => "a1",
            Rule::A2 => "a2",
            Rule::A1Randomized => "a1_randomized",
            Rule::A2Randomized => "a2_randomized",
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, Rule::A1Randomized | Rule::A2Randomized)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown sampling rule `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPolicy {
    pub rule: Rule,
    /// Pool size for the randomized rules.
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_top_k() -> usize {
    DEFAULT_TOP_K
}

impl SamplingPolicy {
    pub fn new(rule: Rule) -> Self {
        Self {
            rule,
            top_k: DEFAULT_TOP_K,
            rng_seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        Ok(())
    }
}

/// Campaign termination thresholds; any present criterion may end the run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct StoppingCriteria<T> {
    /// Total dataset size (bootstrap samples included) at which to stop.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_distance: Option<T>,
    /// Stop once the maximum candidate variance falls strictly below this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance_threshold: Option<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    SampleBudget,
    DistanceBudget,
    VarianceThreshold,
    /// Every candidate has already been sampled.
    CandidatesExhausted,
}

impl<T: Scalar> StoppingCriteria<T> {
    pub fn samples(n: usize) -> Self {
        Self {
            max_samples: Some(n),
            max_distance: None,
            variance_threshold: None,
        }
    }

    pub fn distance(d: T) -> Self {
        Self {
            max_samples: None,
            max_distance: Some(d),
            variance_threshold: None,
        }
    }

    pub fn variance(psi: T) -> Self {
        Self {
            max_samples: None,
            max_distance: None,
            variance_threshold: Some(psi),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_samples.is_none() && self.max_distance.is_none() && self.variance_threshold.is_none() {
            return Err(Error::Config("at least one stopping criterion is required".into()));
        }
        if let Some(d) = self.max_distance {
            if !(d >= T::zero()) {
                return Err(Error::Config(format!("distance budget must be non-negative, got {d}")));
            }
        }
        if let Some(v) = self.variance_threshold {
            if !(v > T::zero()) {
                return Err(Error::Config(format!("variance threshold must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// First satisfied criterion, in the order samples, distance, variance.
    pub fn check(&self, samples: usize, distance: T, max_variance: T) -> Option<StopReason> {
        if self.max_samples.is_some_and(|n| samples >= n) {
            return Some(StopReason::SampleBudget);
        }
        if self.max_distance.is_some_and(|d| distance >= d) {
            return Some(StopReason::DistanceBudget);
        }
        if self.variance_threshold.is_some_and(|v| max_variance < v) {
            return Some(StopReason::VarianceThreshold);
        }
        None
    }

    /// Compact label such as `samples=20` or `distance=300+variance=0.4`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if let Some(n) = self.max_samples {
            parts.push(format!("samples={n}"));
        }
        if let Some(d) = self.max_distance {
            parts.push(format!("distance={d}"));
        }
        if let Some(v) = self.variance_threshold {
            parts.push(format!("variance={v}"));
        }
        parts.join("+")
    }
}
