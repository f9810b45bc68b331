//! Batch driver: builds the map suite, enumerates every
//! `(size, map, policy, stopping)` tuple, runs campaigns in a worker pool and
//! aggregates the persisted results.
//!
//! Seeds: map `k` at size `s` uses `map_seed(base_seed, s, k)`; the policy RNG
//! of a tuple uses `tuple_seed(base_seed, tuple_id)` (see [`soilmap::seed`]).
//! The same map suite is therefore shared by every policy and stopping rule.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use soilmap::fields::{generate_gaussian, generate_hybrid, generate_sloped, generate_uniform, FieldKind, GridSpec};
use soilmap::metrics::{rmse_values, summarize_batch, total_cost, SummaryRow};
use soilmap::planner::{run_campaign, SamplingPolicy};
use soilmap::seed::{map_seed, splitmix64, tuple_seed};
use soilmap::{CampaignResultF64, FieldF64, StoppingF64};

use crate::error::{CliError, Result};
use crate::persist::{
    self, read_campaign, write_campaign, write_field, write_manifest, write_summary, CampaignFile, Manifest,
    ManifestEntry, TupleStatus,
};
use crate::plan::ExperimentPlan;

#[derive(Clone, Debug)]
pub struct MapEntry {
    pub id: String,
    pub index: usize,
    pub size: f64,
    pub field: FieldF64,
}

/// Uniform level derived from the map seed, in `[0, 1)`.
fn uniform_level(seed: u64) -> f64 {
    (splitmix64(seed) >> 11) as f64 / (1u64 << 53) as f64
}

/// Map kinds for one size in suite order: uniform, sloped, gaussian, hybrid.
fn kinds(plan: &ExperimentPlan) -> Vec<FieldKind> {
    let c = plan.maps_per_size;
    std::iter::repeat_n(FieldKind::Uniform, c.uniform)
        .chain(std::iter::repeat_n(FieldKind::Sloped, c.sloped))
        .chain(std::iter::repeat_n(FieldKind::Gaussian, c.gaussian))
        .chain(std::iter::repeat_n(FieldKind::Hybrid, c.hybrid))
        .collect()
}

pub fn field_id(size: f64, index: usize, kind: FieldKind) -> String {
    format!("s{:03}_m{index:02}_{}", size as u64, kind.as_str())
}

pub fn build_suite(plan: &ExperimentPlan) -> Result<Vec<MapEntry>> {
    let mut suite = Vec::new();
    for &size in &plan.sizes {
        let spec = GridSpec::unit_spacing(size)?;
        for (index, kind) in kinds(plan).into_iter().enumerate() {
            let seed = map_seed(plan.base_seed, size as u64, index as u64);
            let mut field = match kind {
                FieldKind::Uniform => generate_uniform(spec, uniform_level(seed))?,
                FieldKind::Sloped => generate_sloped(spec, seed)?,
                FieldKind::Gaussian => generate_gaussian(spec, plan.clusters, seed)?,
                FieldKind::Hybrid => generate_hybrid(spec, plan.clusters, seed)?,
            };
            field.seed = seed;
            suite.push(MapEntry {
                id: field_id(size, index, kind),
                index,
                size,
                field,
            });
        }
    }
    Ok(suite)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tuple {
    pub id: String,
    pub map: usize,
    pub policy: SamplingPolicy,
    pub stopping: StoppingF64,
}

fn stopping_slug(s: &StoppingF64) -> String {
    s.label().replace('=', "").replace('+', "_")
}

/// Every campaign of the plan in deterministic order.
pub fn enumerate_tuples(plan: &ExperimentPlan, suite: &[MapEntry]) -> Vec<Tuple> {
    let mut tuples = Vec::with_capacity(plan.campaign_count());
    for (m, entry) in suite.iter().enumerate() {
        for p in &plan.policies {
            for s in &plan.stopping_grid {
                let mut id = format!("{}__{}__{}", entry.id, p.rule, stopping_slug(s));
                if p.top_k != soilmap::planner::DEFAULT_TOP_K && p.rule.is_randomized() {
                    id.push_str(&format!("__top{}", p.top_k));
                }
                let policy = SamplingPolicy {
                    rule: p.rule,
                    top_k: p.top_k,
                    rng_seed: tuple_seed(plan.base_seed, &id),
                };
                tuples.push(Tuple {
                    id,
                    map: m,
                    policy,
                    stopping: *s,
                });
            }
        }
    }
    tuples
}

pub fn results_dir(output_dir: &Path) -> PathBuf {
    output_dir.join("results")
}

#[derive(Debug, Default)]
pub struct RunReport {
    pub executed: usize,
    pub skipped: usize,
    pub failed: Vec<(String, String)>,
    pub summary: Vec<SummaryRow>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.failed.is_empty() {
            0
        } else {
            2
        }
    }
}

pub fn generate_fields(plan: &ExperimentPlan) -> Result<Vec<PathBuf>> {
    plan.validate()?;
    let dir = plan.output_dir.join("fields");
    build_suite(plan)?
        .iter()
        .map(|m| write_field(&dir, &m.id, &m.field))
        .collect()
}

fn run_tuple(plan: &ExperimentPlan, suite: &[MapEntry], tuple: &Tuple) -> Result<TupleStatus> {
    let dir = results_dir(&plan.output_dir).join(&tuple.id);
    if read_campaign(&dir).is_ok() {
        return Ok(TupleStatus::Skipped);
    }
    let map = &suite[tuple.map];
    let config = plan.planner.config_for(map.size)?;
    let result = run_campaign(&map.field, &tuple.policy, &tuple.stopping, &config)?;
    let record = CampaignFile {
        tuple_id: tuple.id.clone(),
        field_id: map.id.clone(),
        field_kind: map.field.kind,
        map_index: map.index,
        size: map.size,
        rmse: rmse_values(&result.final_reconstruction, &map.field.values)?,
        total_cost: total_cost(&result, plan.planner.sample_cost),
        result,
    };
    write_campaign(&dir, record, &map.field, plan.write_images)?;
    Ok(TupleStatus::Executed)
}

/// Runs (or resumes) a full plan and writes the manifest and summaries.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<RunReport> {
    plan.validate()?;
    let out = &plan.output_dir;
    persist::create_dir(out)?;
    let suite = build_suite(plan)?;
    let fields_dir = out.join("fields");
    for m in &suite {
        write_field(&fields_dir, &m.id, &m.field)?;
    }
    let tuples = enumerate_tuples(plan, &suite);

    let mut builder = rayon::ThreadPoolBuilder::new();
    if plan.workers > 0 {
        builder = builder.num_threads(plan.workers);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<TupleStatus>> =
        pool.install(|| tuples.par_iter().map(|t| run_tuple(plan, &suite, t)).collect());

    let mut report = RunReport::default();
    let mut entries = Vec::with_capacity(tuples.len());
    for (t, outcome) in tuples.iter().zip(outcomes) {
        let (status, error) = match outcome {
            Ok(s) => (s, None),
            Err(e) => (TupleStatus::Failed, Some(e.to_string())),
        };
        match status {
            TupleStatus::Executed => report.executed += 1,
            TupleStatus::Skipped => report.skipped += 1,
            TupleStatus::Failed => report
                .failed
                .push((t.id.clone(), error.clone().unwrap_or_default())),
        }
        entries.push(ManifestEntry {
            tuple_id: t.id.clone(),
            status,
            error,
        });
    }
    write_manifest(
        &out.join("manifest.json"),
        &Manifest {
            base_seed: plan.base_seed,
            tuples: entries,
        },
    )?;

    let completed: Vec<CampaignResultF64> = tuples
        .iter()
        .filter_map(|t| read_campaign(&results_dir(out).join(&t.id)).ok())
        .map(|c| c.result)
        .collect();
    report.summary = summarize_batch(&completed);
    write_summary(&out.join("summary"), &report.summary)?;
    Ok(report)
}

/// Every readable campaign record under `output_dir/results`, sorted by
/// tuple id.
pub fn load_campaigns(output_dir: &Path) -> Result<Vec<CampaignFile>> {
    let dir = results_dir(output_dir);
    let entries = std::fs::read_dir(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join(persist::CAMPAIGN_FILE).is_file())
        .collect();
    paths.sort();
    paths.iter().map(|p| read_campaign(p)).collect()
}

/// Recomputes and rewrites `summary/` from the persisted campaign records.
pub fn summarize_dir(output_dir: &Path) -> Result<Vec<SummaryRow>> {
    let results: Vec<CampaignResultF64> = load_campaigns(output_dir)?.into_iter().map(|c| c.result).collect();
    let rows = summarize_batch(&results);
    write_summary(&output_dir.join("summary"), &rows)?;
    Ok(rows)
}
