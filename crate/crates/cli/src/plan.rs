//! Experiment plan: the declarative description of a batch run, loadable
//! from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use soilmap::gp::GpHyperparams;
use soilmap::planner::{PlannerConfig, Rule, SamplingPolicy, StoppingCriteria, DEFAULT_TOP_K};
use soilmap::{Point2, StoppingF64};

use crate::error::{CliError, Result};

/// Number of maps of each kind generated per environment size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapComposition {
    pub uniform: usize,
    pub sloped: usize,
    pub gaussian: usize,
    pub hybrid: usize,
}

impl Default for MapComposition {
    fn default() -> Self {
        Self {
            uniform: 1,
            sloped: 1,
            gaussian: 5,
            hybrid: 5,
        }
    }
}

impl MapComposition {
    pub fn total(&self) -> usize {
        self.uniform + self.sloped + self.gaussian + self.hybrid
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub rule: Rule,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
}

fn default_top_k() -> usize {
    DEFAULT_TOP_K
}

/// GP and robot settings shared by every campaign of a plan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerSettings {
    pub signal_variance: f64,
    /// Fixed length scale; when absent, `length_scale_fraction × side` is used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length_scale: Option<f64>,
    pub length_scale_fraction: f64,
    pub noise_variance: f64,
    pub coarse_k: usize,
    pub start: [f64; 2],
    pub candidate_stride: usize,
    /// Cost per probe insertion, added to travel distance in the total cost.
    pub sample_cost: f64,
}

impl Default for PlannerSettings {
    fn default() -> Self {
        Self {
            signal_variance: 1.0,
            length_scale: None,
            length_scale_fraction: 0.2,
            noise_variance: GpHyperparams::<f64>::DEFAULT_NOISE_VARIANCE,
            coarse_k: 2,
            start: [0.0, 0.0],
            candidate_stride: 1,
            sample_cost: 0.0,
        }
    }
}

impl PlannerSettings {
    pub fn config_for(&self, side: f64) -> Result<PlannerConfig<f64>> {
        let ell = self.length_scale.unwrap_or(self.length_scale_fraction * side);
        let h = GpHyperparams::new(self.signal_variance, ell, self.noise_variance)?;
        Ok(PlannerConfig {
            hyperparams: Some(h),
            coarse_k: self.coarse_k,
            start: Point2::new(self.start[0], self.start[1]),
            candidate_stride: self.candidate_stride,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentPlan {
    pub sizes: Vec<f64>,
    pub maps_per_size: MapComposition,
    pub clusters: usize,
    pub policies: Vec<PolicySpec>,
    pub stopping_grid: Vec<StoppingF64>,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub planner: PlannerSettings,
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
    pub write_images: bool,
}

impl Default for ExperimentPlan {
    /// Five sizes, twelve maps each, all five rules and the eleven separate
    /// stopping configurations.
    fn default() -> Self {
        let mut stopping_grid: Vec<StoppingF64> = [20, 40, 60, 80, 100]
            .into_iter()
            .map(StoppingCriteria::samples)
            .collect();
        stopping_grid.extend([300.0, 600.0, 900.0, 1200.0, 1500.0].map(StoppingCriteria::distance));
        stopping_grid.push(StoppingCriteria::variance(0.4));
        Self {
            sizes: vec![20.0, 40.0, 60.0, 80.0, 100.0],
            maps_per_size: MapComposition::default(),
            clusters: soilmap::fields::DEFAULT_CLUSTERS,
            policies: Rule::ALL
                .into_iter()
                .map(|rule| PolicySpec {
                    rule,
                    top_k: DEFAULT_TOP_K,
                })
                .collect(),
            stopping_grid,
            base_seed: 2025,
            output_dir: PathBuf::from("soilmap-out"),
            planner: PlannerSettings::default(),
            workers: 0,
            write_images: true,
        }
    }
}

impl ExperimentPlan {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("{}: {e}", origin.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let plan = Self::from_toml(&text, path)?;
        Ok(plan)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("plan serializes to toml")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.sizes.is_empty() {
            return bad("at least one environment size is required".into());
        }
        if let Some(s) = self.sizes.iter().find(|s| !(**s > 0.0) || s.fract() != 0.0) {
            return bad(format!("environment sizes must be positive integers, got {s}"));
        }
        if self.maps_per_size.total() == 0 {
            return bad("maps_per_size must contain at least one map".into());
        }
        if self.clusters == 0 && (self.maps_per_size.gaussian > 0 || self.maps_per_size.hybrid > 0) {
            return bad("gaussian and hybrid maps need at least one cluster".into());
        }
        if self.policies.is_empty() {
            return bad("at least one policy is required".into());
        }
        for p in &self.policies {
            SamplingPolicy { rule: p.rule, top_k: p.top_k, rng_seed: 0 }.validate()?;
        }
        if self.stopping_grid.is_empty() {
            return bad("stopping_grid must contain at least one entry".into());
        }
        for s in &self.stopping_grid {
            s.validate()?;
        }
        if self.planner.coarse_k == 0 {
            return bad("planner.coarse_k must be at least 1".into());
        }
        if self.planner.sample_cost < 0.0 {
            return bad("planner.sample_cost must be non-negative".into());
        }
        for &side in &self.sizes {
            self.planner.config_for(side)?;
        }
        Ok(())
    }

    pub fn campaign_count(&self) -> usize {
        self.sizes.len() * self.maps_per_size.total() * self.policies.len() * self.stopping_grid.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plan_matches_protocol_counts() {
        let p = ExperimentPlan::default();
        p.validate().unwrap();
        assert_eq!(p.maps_per_size.total(), 12);
        assert_eq!(p.sizes.len() * p.maps_per_size.total(), 60);
        assert_eq!(p.campaign_count(), 5 * 12 * 5 * 11);
    }

    #[test]
    fn toml_round_trip_and_partial_files() {
        let p = ExperimentPlan::default();
        let back = ExperimentPlan::from_toml(&p.to_toml(), Path::new("x.toml")).unwrap();
        assert_eq!(back, p);

        let partial = r#"
            sizes = [20.0]
            base_seed = 9
            [[policies]]
            rule = "a2_randomized"
            [[stopping_grid]]
            variance_threshold = 0.4
            [planner]
            length_scale = 3.0
        "#;
        let p = ExperimentPlan::from_toml(partial, Path::new("p.toml")).unwrap();
        p.validate().unwrap();
        assert_eq!(p.policies[0].top_k, 5);
        assert_eq!(p.maps_per_size.total(), 12);
        assert_eq!(p.campaign_count(), 12);
        assert_eq!(p.planner.config_for(20.0).unwrap().hyperparams.unwrap().length_scale, 3.0);
    }

    #[test]
    fn invalid_plans_are_rejected() {
        let mut p = ExperimentPlan::default();
        p.sizes = vec![-5.0];
        assert!(matches!(p.validate(), Err(CliError::Config(_))));

        let mut p = ExperimentPlan::default();
        p.stopping_grid = vec![StoppingCriteria {
            max_samples: None,
            max_distance: None,
            variance_threshold: None,
        }];
        assert!(p.validate().is_err());

        let mut p = ExperimentPlan::default();
        p.maps_per_size = MapComposition { uniform: 0, sloped: 0, gaussian: 0, hybrid: 0 };
        assert!(p.validate().is_err());

        assert!(ExperimentPlan::from_toml("sizes = [20.0]\nbogus = 1", Path::new("b.toml")).is_err());
    }
}
