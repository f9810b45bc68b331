//! On-disk formats: field headers, campaign records, grids and summaries.
//!
//! Layout under an output directory:
//!
//! ```text
//! fields/<field-id>.json        header (kind, seed, spec, params, grid file)
//! fields/<field-id>.csv         node grid, one line per row of constant y
//! results/<tuple-id>/campaign.json
//! results/<tuple-id>/trajectory.csv
//! results/<tuple-id>/mean.csv, variance.csv, truth.pgm, mean.pgm, variance.pgm
//! summary/<metric>.csv, summary/summary.json
//! manifest.json
//! ```

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use soilmap::fields::{FieldKind, FieldParams, GridSpec, GroundTruthField};
use soilmap::io::{read_csv_matrix, write_csv_matrix, write_pgm};
use soilmap::metrics::{Metric, SummaryRow};
use soilmap::CampaignResultF64;

use crate::error::{CliError, Result};

pub const CAMPAIGN_FILE: &str = "campaign.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub kind: FieldKind,
    pub seed: u64,
    pub spec: GridSpec<f64>,
    pub params: FieldParams<f64>,
    /// Grid file name, relative to the header.
    pub values: String,
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::parse(path, e))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_reader(BufReader::new(f)).map_err(|e| CliError::parse(path, e))
}

pub fn write_grid_csv(path: &Path, values: &[f64], resolution: usize) -> Result<()> {
    let mut w = create(path)?;
    write_csv_matrix(values, resolution, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

pub fn read_grid_csv(path: &Path) -> Result<(Vec<f64>, usize)> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_csv_matrix(BufReader::new(f)).map_err(|e| CliError::parse(path, e))
}

/// Graymap on the fixed `[0, 1]` scale.
pub fn write_grid_pgm(path: &Path, values: &[f64], resolution: usize) -> Result<()> {
    let mut w = create(path)?;
    write_pgm(values, resolution, 0.0, 1.0, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

/// Writes `<dir>/<id>.json` and `<dir>/<id>.csv`; returns the header path.
pub fn write_field(dir: &Path, id: &str, field: &GroundTruthField<f64>) -> Result<PathBuf> {
    create_dir(dir)?;
    let csv_name = format!("{id}.csv");
    write_grid_csv(&dir.join(&csv_name), &field.values, field.spec.resolution)?;
    let header = FieldHeader {
        kind: field.kind,
        seed: field.seed,
        spec: field.spec,
        params: field.params.clone(),
        values: csv_name,
    };
    let path = dir.join(format!("{id}.json"));
    write_json(&path, &header)?;
    Ok(path)
}

pub fn read_field(header_path: &Path) -> Result<GroundTruthField<f64>> {
    let header: FieldHeader = read_json(header_path)?;
    header.spec.validate().map_err(|e| CliError::parse(header_path, e))?;
    let dir = header_path.parent().unwrap_or(Path::new("."));
    let grid_path = dir.join(&header.values);
    let (values, res) = read_grid_csv(&grid_path)?;
    if res != header.spec.resolution {
        return Err(CliError::parse(
            &grid_path,
            format!("grid has {res} nodes per side, header says {}", header.spec.resolution),
        ));
    }
    Ok(GroundTruthField {
        spec: header.spec,
        kind: header.kind,
        seed: header.seed,
        params: header.params,
        values,
    })
}

/// Persisted campaign: tuple metadata plus the campaign record. The final
/// grids live in `mean.csv` / `variance.csv` and are left empty here.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignFile {
    pub tuple_id: String,
    pub field_id: String,
    pub field_kind: FieldKind,
    pub map_index: usize,
    pub size: f64,
    pub rmse: f64,
    pub total_cost: f64,
    pub result: CampaignResultF64,
}

/// Writes every per-campaign artifact, `campaign.json` last (via rename), so
/// a directory with a readable `campaign.json` is complete.
pub fn write_campaign(
    dir: &Path,
    mut record: CampaignFile,
    truth: &GroundTruthField<f64>,
    images: bool,
) -> Result<()> {
    create_dir(dir)?;
    let res = record.result.grid.resolution;
    write_trajectory(&dir.join("trajectory.csv"), &record.result)?;
    write_grid_csv(&dir.join("mean.csv"), &record.result.final_reconstruction, res)?;
    write_grid_csv(&dir.join("variance.csv"), &record.result.final_variance_grid, res)?;
    if images {
        write_grid_pgm(&dir.join("truth.pgm"), &truth.values, res)?;
        write_grid_pgm(&dir.join("mean.pgm"), &record.result.final_reconstruction, res)?;
        write_grid_pgm(&dir.join("variance.pgm"), &record.result.final_variance_grid, res)?;
    }
    record.result.final_reconstruction.clear();
    record.result.final_variance_grid.clear();
    let tmp = dir.join("campaign.json.tmp");
    write_json(&tmp, &record)?;
    let dst = dir.join(CAMPAIGN_FILE);
    fs::rename(&tmp, &dst).map_err(|e| CliError::io(&dst, e))
}

pub fn read_campaign(dir: &Path) -> Result<CampaignFile> {
    read_json(&dir.join(CAMPAIGN_FILE))
}

/// `step,x,y,cumulative_distance`; step 0 is the start pose.
pub fn write_trajectory(path: &Path, result: &CampaignResultF64) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| CliError::io(path, e);
    writeln!(w, "step,x,y,cumulative_distance").map_err(io)?;
    let mut dist = 0.0;
    for (k, p) in result.trajectory.iter().enumerate() {
        if k > 0 {
            dist += result.trajectory[k - 1].distance(p);
        }
        writeln!(w, "{k},{},{},{dist}", p.x, p.y).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleStatus {
    Executed,
    Skipped,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub tuple_id: String,
    pub status: TupleStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub base_seed: u64,
    pub tuples: Vec<ManifestEntry>,
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> Result<()> {
    write_json(path, manifest)
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    read_json(path)
}

pub const SUMMARY_HEADER: &str = "policy,size,stopping,mean,std,n,excluded_flag";

/// One CSV per metric plus a JSON dump of every row.
pub fn write_summary(dir: &Path, rows: &[SummaryRow]) -> Result<()> {
    create_dir(dir)?;
    for metric in Metric::ALL {
        let path = dir.join(format!("{}.csv", metric.as_str()));
        let mut w = create(&path)?;
        let io = |e| CliError::io(&path, e);
        writeln!(w, "{SUMMARY_HEADER}").map_err(io)?;
        for r in rows.iter().filter(|r| r.metric == metric) {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.policy, r.size, r.stopping, r.mean, r.std, r.n, r.excluded
            )
            .map_err(io)?;
        }
        w.flush().map_err(io)?;
    }
    write_json(&dir.join("summary.json"), &rows)
}
