//! `vilenkin`: configuration-driven experiment runner for Fourier analysis on
//! finite quotient towers.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 when the
//! experiment runs but an asserted invariant fails.

mod config;
mod experiments;
mod export;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ExperimentConfig;
use experiments::{run_experiment, ExperimentKind};
use export::Format;

const EXIT_CONFIG_ERROR: u8 = 2;
const EXIT_INVARIANT_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "vilenkin",
    version,
    about = "Experiments on finite quotients of compact Vilenkin groups"
)]
struct Cli {
    #[command(subcommand)]
    experiment: Experiment,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// TOML experiment configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory for the report files (default: current directory).
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Output format: `json` writes report.json; `csv` adds per-table files.
    #[arg(long, value_name = "FORMAT", default_value = "json")]
    format: String,
    /// Overrides the seed of a random function family.
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
    /// Overrides the tower depth.
    #[arg(long, value_name = "INT")]
    depth: Option<usize>,
}

#[derive(Subcommand)]
enum Experiment {
    /// Enumerate the unitary dual and verify completeness.
    Dual(CommonArgs),
    /// Fourier round-trip and Plancherel residuals for a function.
    Transform(CommonArgs),
    /// Vladimirov-Taibleson operator: direct vs spectral application.
    Vt(CommonArgs),
    /// Modulus-of-continuity table with the two-sided tail bounds.
    Modulus(CommonArgs),
    /// Hausdorff-Young-side tail decay and dual-norm convergence boundary.
    Titchmarsh1(CommonArgs),
    /// Lipschitz order vs Plancherel tail decay equivalence.
    Titchmarsh2(CommonArgs),
    /// Dini-Lipschitz two-parameter profile fit.
    Dini(CommonArgs),
    /// Condition (A) positivity constants from witness recipes.
    ConditionA(CommonArgs),
}

impl Experiment {
    fn split(&self) -> (ExperimentKind, &CommonArgs) {
        match self {
            Experiment::Dual(a) => (ExperimentKind::Dual, a),
            Experiment::Transform(a) => (ExperimentKind::Transform, a),
            Experiment::Vt(a) => (ExperimentKind::Vt, a),
            Experiment::Modulus(a) => (ExperimentKind::Modulus, a),
            Experiment::Titchmarsh1(a) => (ExperimentKind::Titchmarsh1, a),
            Experiment::Titchmarsh2(a) => (ExperimentKind::Titchmarsh2, a),
            Experiment::Dini(a) => (ExperimentKind::Dini, a),
            Experiment::ConditionA(a) => (ExperimentKind::ConditionA, a),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.experiment.split();
    match run(kind, args) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INVARIANT_FAILURE)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_CONFIG_ERROR)
        }
    }
}

fn run(kind: ExperimentKind, args: &CommonArgs) -> Result<bool, config::ConfigError> {
    let format: Format = args.format.parse()?;
    let mut cfg = ExperimentConfig::load(&args.config)?;
    cfg.apply_overrides(args.seed, args.depth)?;
    let report = run_experiment(kind, &cfg)?;
    let files = export::export(&report, &args.out, format)?;
    for f in &files {
        println!("wrote {}", f.display());
    }
    println!(
        "{}: {}",
        report.experiment,
        if report.pass { "pass" } else { "FAIL" }
    );
    Ok(report.pass)
}
