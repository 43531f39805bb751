//! Predictor tables over a parameter grid: one row per (predictor, params).

use dirsup::bounds::{
    halasz_predictor, lemma22_ratio, nu_balance, queffelec_predictor, remark1_exponent,
    thm1_predictor, thm31a_upper,
};
use dirsup::numtheory::sieve_primes;
use dirsup::weights::b_star;

use crate::config::ExperimentConfig;
use crate::table::{Cell, CsvTable, BOUNDS_HEADER};
use crate::CliError;

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let weight = super::parse_weight(cfg)?;
    let n_list = cfg
        .n_list
        .clone()
        .unwrap_or_else(|| vec![1_000, 10_000, 100_000, 1_000_000]);
    let sigma_list = cfg.sigma_list.clone().unwrap_or_else(|| vec![0.0, 0.25, 0.5]);
    let b_list = cfg.b_list.clone().unwrap_or_else(|| vec![0.0, 0.15, 0.3]);
    if n_list.is_empty() {
        return Err(CliError::usage("n_list must be nonempty"));
    }
    let max_n = *n_list.iter().max().unwrap();
    let table = sieve_primes(max_n.max(16));

    let mut csv = CsvTable::new(BOUNDS_HEADER);
    let mut push = |name: &str,
                    n: Option<u64>,
                    sigma: Option<f64>,
                    tau: Option<usize>,
                    b: Option<f64>,
                    value: f64| {
        csv.row(&[
            Cell::Text(name.to_string()),
            match n {
                Some(v) => Cell::Int(v),
                None => Cell::Empty,
            },
            Cell::opt_float(sigma),
            match tau {
                Some(v) => Cell::Int(v as u64),
                None => Cell::Empty,
            },
            Cell::opt_float(b),
            Cell::Float(value),
        ]);
    };

    for &n in &n_list {
        push("halasz", Some(n), None, None, None, halasz_predictor(n)?);
        for &sigma in &sigma_list {
            push("queffelec", Some(n), Some(sigma), None, None, queffelec_predictor(n, sigma)?);
            push(
                "thm1",
                Some(n),
                Some(sigma),
                None,
                None,
                thm1_predictor(n, sigma, &weight)?,
            );
        }
        let taus = match &cfg.tau_list {
            Some(list) => list.clone(),
            None => {
                let sqrt_n = (n as f64).sqrt() as u64;
                vec![table.prime_pi(sqrt_n)?.max(1)]
            }
        };
        for &tau in &taus {
            if n >= 16 {
                let bound = thm31a_upper(n, tau, &table)?;
                push(
                    &format!("thm31a_{}", bound.regime.tag()),
                    Some(n),
                    None,
                    Some(tau),
                    None,
                    bound.value,
                );
            }
        }
        for &b in &b_list {
            push("lemma22", Some(n), None, None, Some(b), lemma22_ratio(b, n, &table)?);
            if n >= 16 {
                let nb = nu_balance(n, Some(b))?;
                push("nu_power", Some(n), None, None, Some(b), nb.nu as f64);
                if let Some(comp) = nb.comp {
                    push("nu_comp", Some(n), None, None, Some(b), comp);
                }
            }
        }
        if n >= 16 {
            let nb = nu_balance(n, None)?;
            push("nu_vast", Some(n), None, None, None, nb.nu as f64);
        }
    }
    for &b in &b_list {
        if b >= b_star() && b < 0.5 {
            push("remark1_r", None, None, None, Some(b), remark1_exponent(b)?);
        }
    }

    let dir = super::out_dir(cfg)?;
    let path = super::write_artifact(&dir, "bounds.csv", &csv.finish())?;
    println!("wrote {}", path.display());
    Ok(())
}
