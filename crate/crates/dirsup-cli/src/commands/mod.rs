pub mod bounds;
pub mod cube;
pub mod profile;
pub mod report;
pub mod simulate;
pub mod verify;

use std::path::{Path, PathBuf};
use std::process::Command;

use serde::Serialize;

use dirsup::supremum::EstimatorConfig;
use dirsup::weights::WeightSpec;

use crate::config::ExperimentConfig;
use crate::CliError;

pub fn parse_weight(cfg: &ExperimentConfig) -> Result<WeightSpec, CliError> {
    match cfg.weight.as_deref().unwrap_or("unit") {
        "unit" => Ok(WeightSpec::Unit),
        "divisor" => Ok(WeightSpec::Divisor),
        "mangoldt" => Ok(WeightSpec::Mangoldt),
        other => Err(CliError::usage(format!(
            "unknown weight id '{other}' (expected unit | divisor | mangoldt)"
        ))),
    }
}

pub fn require_seed(cfg: &ExperimentConfig) -> Result<u64, CliError> {
    cfg.seed
        .ok_or_else(|| CliError::usage("this command requires --seed (or \"seed\" in the config)"))
}

pub fn out_dir(cfg: &ExperimentConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

pub fn write_artifact(dir: &Path, name: &str, content: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn git_describe() -> String {
    Command::new("git")
        .args(["describe", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|o| String::from_utf8_lossy(&o.stdout).trim().to_string())
        .unwrap_or_else(|| "unknown".to_string())
}

#[derive(Serialize)]
struct Sidecar<'a> {
    command: &'a str,
    config: ExperimentConfig,
    git: String,
}

/// JSON sidecar with the full experiment config echo and a version string.
pub fn write_sidecar(
    dir: &Path,
    command: &str,
    cfg: &ExperimentConfig,
) -> Result<(), CliError> {
    let sidecar = Sidecar { command, config: cfg.echo(), git: git_describe() };
    let text = serde_json::to_string_pretty(&sidecar)
        .map_err(|e| CliError::usage(format!("cannot serialize sidecar: {e}")))?;
    write_artifact(dir, &format!("{command}.json"), &(text + "\n"))?;
    Ok(())
}

/// Estimator from the config, with the documented defaults. The default
/// grid horizon scales with N.
pub fn estimator_for(cfg: &ExperimentConfig, n: u64) -> Result<EstimatorConfig, CliError> {
    match cfg.estimator.as_deref().unwrap_or("torus_multistart") {
        "t_grid" => Ok(EstimatorConfig::TGrid {
            t_max: cfg.t_max.unwrap_or(1e4 * n as f64),
            grid_count: cfg.grid_count.unwrap_or(1_000_000),
            refine_iters: cfg.refine_iters.unwrap_or(40),
        }),
        "torus_multistart" => Ok(EstimatorConfig::TorusMultistart {
            starts: cfg.starts.unwrap_or(64),
            iters: cfg.iters.unwrap_or(200),
        }),
        "torus_dense" => Ok(EstimatorConfig::TorusDense {
            per_axis: cfg.per_axis.unwrap_or(64),
        }),
        other => Err(CliError::usage(format!(
            "unknown estimator '{other}' (expected t_grid | torus_multistart | torus_dense)"
        ))),
    }
}
