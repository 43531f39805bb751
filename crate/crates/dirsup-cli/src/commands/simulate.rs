//! Expected-supremum sweep: one row per (N, sigma) with the Monte Carlo
//! mean, its standard error, the weighted predictor, and their ratio.

use dirsup::bounds::thm1_predictor;
use dirsup::dirichlet::PolynomialSpec;
use dirsup::numtheory::sieve_primes;
use dirsup::supremum::{derive_stream_seed, expected_sup};

use crate::config::ExperimentConfig;
use crate::table::{Cell, CsvTable, SIMULATE_HEADER};
use crate::CliError;

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let seed = super::require_seed(cfg)?;
    let weight = super::parse_weight(cfg)?;
    let n_list = cfg.n_list.clone().unwrap_or_else(|| vec![16, 64, 256]);
    let sigma_list = cfg.sigma_list.clone().unwrap_or_else(|| vec![0.0]);
    let n_draws = cfg.n_draws.unwrap_or(100);
    if n_list.is_empty() || sigma_list.is_empty() {
        return Err(CliError::usage("n_list and sigma_list must be nonempty"));
    }
    let max_n = *n_list.iter().max().unwrap();
    let table = sieve_primes(max_n.max(2));

    let mut csv = CsvTable::new(SIMULATE_HEADER);
    let mut row_idx = 0u64;
    for &sigma in &sigma_list {
        for &n in &n_list {
            let estimator = super::estimator_for(cfg, n)?;
            let spec = PolynomialSpec::new(n, sigma, weight.clone())?;
            let mc = expected_sup(
                &spec,
                &table,
                &estimator,
                n_draws,
                derive_stream_seed(seed, row_idx),
            )?;
            let predictor = if n >= 2 {
                Some(thm1_predictor(n, sigma, &weight)?)
            } else {
                None
            };
            let ratio = predictor.map(|p| mc.mean / p);
            csv.row(&[
                Cell::Int(n),
                Cell::Float(sigma),
                Cell::Text(weight.id().to_string()),
                Cell::Int(n_draws),
                Cell::Float(mc.mean),
                Cell::Float(mc.stderr),
                Cell::opt_float(predictor),
                Cell::opt_float(ratio),
            ]);
            row_idx += 1;
        }
    }

    let dir = super::out_dir(cfg)?;
    let path = super::write_artifact(&dir, "simulate.csv", &csv.finish())?;
    super::write_sidecar(&dir, "simulate", cfg)?;
    println!("wrote {}", path.display());
    Ok(())
}
