//! Heatmap rendering of fields and campaign outputs on a fixed `[0, 1]` scale.

use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};
use crate::persist::{self, read_campaign, read_field, read_grid_csv, write_grid_pgm, CAMPAIGN_FILE};

/// Renders `input` into graymaps under `out`.
///
/// `input` may be a campaign directory (truth, mean and variance images), a
/// field header `.json` (truth image) or a bare grid `.csv`.
pub fn render_heatmaps(input: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    persist::create_dir(out)?;
    let mut written = Vec::new();
    if input.is_dir() {
        if !input.join(CAMPAIGN_FILE).is_file() {
            return Err(CliError::parse(input, "directory does not contain a campaign.json"));
        }
        let record = read_campaign(input)?;
        let fields_dir = input
            .parent()
            .and_then(Path::parent)
            .map(|root| root.join("fields"))
            .unwrap_or_else(|| PathBuf::from("fields"));
        let truth = read_field(&fields_dir.join(format!("{}.json", record.field_id)))?;
        let res = truth.spec.resolution;
        let p = out.join("truth.pgm");
        write_grid_pgm(&p, &truth.values, res)?;
        written.push(p);
        for name in ["mean", "variance"] {
            let src = input.join(format!("{name}.csv"));
            let (values, r) = read_grid_csv(&src)?;
            if r != res {
                return Err(CliError::parse(&src, format!("grid is {r} wide, truth is {res}")));
            }
            let p = out.join(format!("{name}.pgm"));
            write_grid_pgm(&p, &values, r)?;
            written.push(p);
        }
        return Ok(written);
    }
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| CliError::parse(input, "cannot derive an output name"))?;
    let p = out.join(format!("{stem}.pgm"));
    match input.extension().and_then(|e| e.to_str()) {
        Some("json") => {
            let field = read_field(input)?;
            write_grid_pgm(&p, &field.values, field.spec.resolution)?;
        }
        Some("csv") => {
            let (values, res) = read_grid_csv(input)?;
            write_grid_pgm(&p, &values, res)?;
        }
        _ => return Err(CliError::parse(input, "expected a campaign directory, .json field or .csv grid")),
    }
    written.push(p);
    Ok(written)
}
