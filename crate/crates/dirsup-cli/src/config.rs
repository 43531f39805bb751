//! Experiment configuration: a flat JSON file mirroring the CLI flags,
//! with flags taking precedence over the file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Weight id: unit | divisor | mangoldt.
    pub weight: Option<String>,
    pub sigma_list: Option<Vec<f64>>,
    pub n_list: Option<Vec<u64>>,
    pub tau_list: Option<Vec<usize>>,
    pub b_list: Option<Vec<f64>>,
    /// Profile length (rows 1..=m_max).
    pub m_max: Option<u64>,
    /// Estimator id: t_grid | torus_multistart | torus_dense.
    pub estimator: Option<String>,
    pub t_max: Option<f64>,
    pub grid_count: Option<u64>,
    pub refine_iters: Option<u32>,
    pub starts: Option<u32>,
    pub iters: Option<u32>,
    pub per_axis: Option<u32>,
    pub n_draws: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    /// Input CSVs for `report`.
    pub input: Option<Vec<PathBuf>>,
    /// Named fault for `verify` (testing the failure path).
    pub inject_fault: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("malformed config {}: {e}", path.display())))
    }

    /// Echo of the experiment-relevant fields for the JSON sidecar.
    /// Runtime knobs (workers, out, input) are excluded so artifacts stay
    /// byte-identical across worker counts and output locations.
    pub fn echo(&self) -> ExperimentConfig {
        let mut c = self.clone();
        c.workers = None;
        c.out = None;
        c.input = None;
        c.inject_fault = None;
        c
    }
}
