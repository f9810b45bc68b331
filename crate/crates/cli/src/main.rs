use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use soilmap_cli::error::{CliError, Result};
use soilmap_cli::{experiment, render, ExperimentPlan};

#[derive(Parser)]
#[command(name = "soilmap", version, about = "GP adaptive-sampling experiments for scalar field mapping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the ground-truth map suite into `<output-dir>/fields`.
    GenerateFields(PlanArgs),
    /// Run (or resume) every campaign of the plan.
    Run(PlanArgs),
    /// Rebuild `summary/` from the campaign records in an output directory.
    Summarize {
        #[arg(long, short)]
        output_dir: PathBuf,
    },
    /// Render a field header, grid csv or campaign directory as graymaps.
    Render {
        input: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
    },
}

/// Plan overrides; flags win over the config file, which wins over defaults.
#[derive(Args)]
struct PlanArgs {
    /// TOML experiment plan.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long, short)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated environment sides, e.g. `20,40`.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<f64>>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    no_images: bool,
    /// Print the resolved plan as TOML and exit.
    #[arg(long)]
    print_plan: bool,
}

impl PlanArgs {
    fn resolve(&self) -> Result<ExperimentPlan> {
        let mut plan = match &self.config {
            Some(path) => ExperimentPlan::load(path)?,
            None => ExperimentPlan::default(),
        };
        if let Some(dir) = &self.output_dir {
            plan.output_dir = dir.clone();
        }
        if let Some(seed) = self.seed {
            plan.base_seed = seed;
        }
        if let Some(sizes) = &self.sizes {
            plan.sizes = sizes.clone();
        }
        if let Some(w) = self.workers {
            plan.workers = w;
        }
        if self.no_images {
            plan.write_images = false;
        }
        plan.validate()?;
        Ok(plan)
    }
}

fn report_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn summarize(dir: &Path) -> Result<i32> {
    let rows = experiment::summarize_dir(dir)?;
    println!("{} summary rows written to {}", rows.len(), dir.join("summary").display());
    Ok(0)
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::GenerateFields(args) => {
            let plan = args.resolve()?;
            if args.print_plan {
                print!("{}", plan.to_toml());
                return Ok(0);
            }
            report_paths(&experiment::generate_fields(&plan)?);
            Ok(0)
        }
        Command::Run(args) => {
            let plan = args.resolve()?;
            if args.print_plan {
                print!("{}", plan.to_toml());
                return Ok(0);
            }
            let report = experiment::run_experiment(&plan)?;
            println!(
                "{} executed, {} skipped, {} failed ({} tuples)",
                report.executed,
                report.skipped,
                report.failed.len(),
                plan.campaign_count()
            );
            for (id, err) in &report.failed {
                eprintln!("failed {id}: {err}");
            }
            Ok(report.exit_code())
        }
        Command::Summarize { output_dir } => summarize(&output_dir),
        Command::Render { input, out } => {
            if !input.exists() {
                return Err(CliError::parse(&input, "no such file or directory"));
            }
            report_paths(&render::render_heatmaps(&input, &out)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
