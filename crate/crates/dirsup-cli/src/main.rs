//! Batch experiment driver: runs the invariant suite, Monte Carlo
//! experiments, cube decompositions, predictor tables, weight profiles,
//! and SVG reports from prior CSV artifacts.
//!
//! Exit codes: 0 success, 1 invariant/acceptance violation,
//! 2 usage/config error.

mod commands;
mod config;
mod report_input;
mod svg;
mod table;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed config, missing inputs. Exit 2.
    Usage(String),
    /// A checked invariant or acceptance condition failed. Exit 1.
    Violation(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn violation(msg: impl Into<String>) -> Self {
        CliError::Violation(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Violation(m) => write!(f, "{m}"),
        }
    }
}

impl From<dirsup::Error> for CliError {
    fn from(e: dirsup::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "dirsup", version, about = "Numerical experiments on suprema of random Dirichlet polynomials")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct CommonArgs {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (required for simulate and cube).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (falls back to DIRSUP_THREADS, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the cross-module invariant suite; exit 1 on any violation.
    Verify {
        /// Deliberately break a named constant to test failure reporting.
        #[arg(long)]
        inject_fault: Option<String>,
    },
    /// Monte Carlo expected-supremum sweep over (N, sigma).
    Simulate,
    /// Cube decompositions: expected suprema, bands, and the lower-bound
    /// functional.
    Cube,
    /// Predictor tables over a parameter grid.
    Bounds,
    /// Weight-profile table (one row per M).
    Profile,
    /// Render SVG line plots from prior CSV artifacts.
    Report {
        /// Input CSV (repeatable).
        #[arg(long)]
        input: Vec<PathBuf>,
    },
}

fn resolve_config(common: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if common.seed.is_some() {
        cfg.seed = common.seed;
    }
    if common.workers.is_some() {
        cfg.workers = common.workers;
    }
    if common.out.is_some() {
        cfg.out = common.out.clone();
    }
    Ok(cfg)
}

fn worker_count(cfg: &ExperimentConfig) -> Option<usize> {
    cfg.workers.or_else(|| {
        std::env::var("DIRSUP_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    })
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let mut cfg = resolve_config(&cli.common)?;
    let run = move || -> Result<(), CliError> {
        match cli.command {
            Command::Verify { inject_fault } => {
                if inject_fault.is_some() {
                    cfg.inject_fault = inject_fault;
                }
                commands::verify::run(&cfg)
            }
            Command::Simulate => commands::simulate::run(&cfg),
            Command::Cube => commands::cube::run(&cfg),
            Command::Bounds => commands::bounds::run(&cfg),
            Command::Profile => commands::profile::run(&cfg),
            Command::Report { input } => {
                let mut cfg = cfg.clone();
                if !input.is_empty() {
                    cfg.input = Some(input);
                }
                commands::report::run(&cfg)
            }
        }
    };
    match worker_count(&resolve_config(&cli.common)?) {
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| CliError::usage(format!("cannot build worker pool: {e}")))?;
            pool.install(run)
        }
        None => run(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
