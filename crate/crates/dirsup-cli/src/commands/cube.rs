//! Cube decompositions per (N, tau, sigma): expected supremum (exact where
//! every block permits enumeration, Monte Carlo otherwise), the Khintchine
//! band, the lower-bound functional, and per-block detail rows.

use dirsup::cube::{
    expected_cube_sup, khintchine_band, mean_abs_sign_sum, thm31b_value, CubeDecomposition,
    CubeMode, EXACT_BLOCK_LIMIT, KHINTCHINE_LOWER,
};
use dirsup::numtheory::sieve_primes;
use dirsup::supremum::derive_stream_seed;

use crate::config::ExperimentConfig;
use crate::table::{Cell, CsvTable, CUBE_BLOCKS_HEADER, CUBE_HEADER};
use crate::CliError;

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let seed = super::require_seed(cfg)?;
    let weight = super::parse_weight(cfg)?;
    let n_list = cfg.n_list.clone().unwrap_or_else(|| vec![1_000, 10_000]);
    let sigma_list = cfg.sigma_list.clone().unwrap_or_else(|| vec![0.5]);
    let n_draws = cfg.n_draws.unwrap_or(200);
    if n_list.is_empty() || sigma_list.is_empty() {
        return Err(CliError::usage("n_list and sigma_list must be nonempty"));
    }
    let max_n = *n_list.iter().max().unwrap();
    let table = sieve_primes(max_n.max(4));

    let mut summary = CsvTable::new(CUBE_HEADER);
    let mut blocks_csv = CsvTable::new(CUBE_BLOCKS_HEADER);
    let mut row_idx = 0u64;
    for &sigma in &sigma_list {
        for &n in &n_list {
            let taus = match &cfg.tau_list {
                Some(list) => list.clone(),
                None => {
                    // default: tau = pi(sqrt N), keeping both arguments of
                    // the lower functional's min active
                    let sqrt_n = (n as f64).sqrt() as u64;
                    vec![table.prime_pi(sqrt_n)?.max(2)]
                }
            };
            for &tau in &taus {
                let decomp = CubeDecomposition::new(n, tau, sigma, &weight, &table)?;
                let exact_ok = decomp
                    .blocks()
                    .iter()
                    .all(|b| b.members.len() <= EXACT_BLOCK_LIMIT);
                let e = if exact_ok {
                    expected_cube_sup(&decomp, CubeMode::Exact)?
                } else {
                    expected_cube_sup(
                        &decomp,
                        CubeMode::MonteCarlo {
                            n_draws,
                            seed: derive_stream_seed(seed, row_idx),
                        },
                    )?
                };
                let (band_lo, band_hi) = khintchine_band(&decomp);
                let functional = thm31b_value(n, tau, &table)?;
                let ratio = if functional > 0.0 { Some(e.mean / functional) } else { None };
                summary.row(&[
                    Cell::Int(n),
                    Cell::Int(tau as u64),
                    Cell::Float(sigma),
                    Cell::Text(weight.id().to_string()),
                    Cell::Float(e.mean),
                    Cell::Float(band_lo),
                    Cell::Float(band_hi),
                    Cell::Float(functional),
                    Cell::opt_float(ratio),
                ]);
                for block in decomp.blocks() {
                    let sqrt_m = block.mass.sqrt();
                    let e_abs = if block.members.len() <= EXACT_BLOCK_LIMIT
                        && !block.members.is_empty()
                    {
                        Some(mean_abs_sign_sum(&block.coeffs)?)
                    } else {
                        None
                    };
                    blocks_csv.row(&[
                        Cell::Int(n),
                        Cell::Int(tau as u64),
                        Cell::Int(block.j as u64),
                        Cell::Int(block.members.len() as u64),
                        Cell::Float(block.mass),
                        Cell::Float(sqrt_m),
                        Cell::opt_float(e_abs),
                        Cell::Float(KHINTCHINE_LOWER * sqrt_m),
                        Cell::Float(sqrt_m),
                    ]);
                }
                row_idx += 1;
            }
        }
    }

    let dir = super::out_dir(cfg)?;
    let path = super::write_artifact(&dir, "cube.csv", &summary.finish())?;
    super::write_artifact(&dir, "cube_blocks.csv", &blocks_csv.finish())?;
    super::write_sidecar(&dir, "cube", cfg)?;
    println!("wrote {}", path.display());
    Ok(())
}
