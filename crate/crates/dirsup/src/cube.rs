//! The discrete-cube lower-bound process: paired blocks, signed block sums,
//! the exact supremum identity over the cube, and the Khintchine sandwich
//! around its expectation.
//!
//! On the cube (coordinates pinned to 0 on the first half and to {0, 1/2}
//! above) the lifted polynomial restricted to the blocks is real and each
//! block carries one independent +/-1 factor, so the supremum collapses to
//! the sum of absolute block sums. That identity is asserted by exhaustive
//! enumeration in the tests, not assumed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::{l_sets, PrimeTable};
use crate::supremum::{derive_stream_seed, mc_from_values, McEstimate};
use crate::dirichlet::SignAssignment;
use crate::weights::WeightSpec;

/// Best lower constant in the L1 Khintchine inequality
/// `c ||a||_2 <= E|sum a_n eps_n| <= ||a||_2`.
pub const KHINTCHINE_LOWER: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Hard cap on exact per-block sign enumeration (2^len patterns).
pub const EXACT_BLOCK_LIMIT: usize = 20;

/// One block: its members `p_j * m`, their coefficients `d(n) n^{-sigma}`,
/// and the L2 mass `sum coeff^2`.
#[derive(Debug, Clone)]
pub struct CubeBlock {
    pub j: usize,
    pub members: Vec<u64>,
    pub coeffs: Vec<f64>,
    pub mass: f64,
}

/// The block decomposition of a weighted polynomial over the cube.
#[derive(Debug, Clone)]
pub struct CubeDecomposition {
    n_max: u64,
    tau: usize,
    sigma: f64,
    blocks: Vec<CubeBlock>,
}

impl CubeDecomposition {
    pub fn new(
        n_max: u64,
        tau: usize,
        sigma: f64,
        weight: &WeightSpec,
        table: &PrimeTable,
    ) -> Result<Self> {
        if !(0.0..=0.5).contains(&sigma) {
            return Err(Error::domain(format!("sigma = {sigma} outside [0, 1/2]")));
        }
        let partition = l_sets(n_max, tau, table)?;
        let values = weight.values(n_max)?;
        let mut blocks = Vec::new();
        for (&j, members) in partition.sets() {
            let coeffs: Vec<f64> = members
                .iter()
                .map(|&n| values[n as usize] * (-sigma * (n as f64).ln()).exp())
                .collect();
            let mass = coeffs.iter().map(|c| c * c).sum();
            blocks.push(CubeBlock { j, members: members.to_vec(), coeffs, mass });
        }
        Ok(CubeDecomposition { n_max, tau, sigma, blocks })
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn blocks(&self) -> &[CubeBlock] {
        &self.blocks
    }

    /// `sum_j sqrt(m_j)`, the upper Khintchine functional.
    pub fn sum_sqrt_masses(&self) -> f64 {
        self.blocks.iter().map(|b| b.mass.sqrt()).sum()
    }

    /// Total member count across blocks.
    pub fn total_len(&self) -> usize {
        self.blocks.iter().map(|b| b.members.len()).sum()
    }
}

/// Signed block sums `S_j = sum_{n in L_j} eps_n d(n) n^{-sigma}` for one
/// sign assignment, aligned with `decomp.blocks()`.
#[derive(Debug, Clone)]
pub struct BlockSums {
    sums: Vec<f64>,
}

impl BlockSums {
    pub fn sums(&self) -> &[f64] {
        &self.sums
    }
}

pub fn block_sums(decomp: &CubeDecomposition, signs: &SignAssignment) -> Result<BlockSums> {
    if signs.n() < decomp.n_max() {
        return Err(Error::shape(format!(
            "sign assignment covers {} indices, decomposition needs {}",
            signs.n(),
            decomp.n_max()
        )));
    }
    let sums = decomp
        .blocks()
        .iter()
        .map(|b| {
            b.members
                .iter()
                .zip(&b.coeffs)
                .map(|(&n, &c)| signs.sign(n) * c)
                .sum()
        })
        .collect();
    Ok(BlockSums { sums })
}

/// Exact supremum of the block process over the cube: `sum_j |S_j|`, equal
/// to the maximum of `|sum_j eta_j S_j|` over all cube sign patterns eta.
pub fn cube_sup(decomp: &CubeDecomposition, signs: &SignAssignment) -> Result<f64> {
    Ok(block_sums(decomp, signs)?.sums().iter().map(|s| s.abs()).sum())
}

/// Exact `E|sum eps_i a_i|` by enumeration of all 2^len sign patterns.
/// Guarded by `EXACT_BLOCK_LIMIT`.
pub fn mean_abs_sign_sum(coeffs: &[f64]) -> Result<f64> {
    let len = coeffs.len();
    if len == 0 {
        return Ok(0.0);
    }
    if len > EXACT_BLOCK_LIMIT {
        return Err(Error::budget(format!(
            "exact enumeration of 2^{len} sign patterns exceeds the 2^{EXACT_BLOCK_LIMIT} guard"
        )));
    }
    let patterns = 1u64 << len;
    let mut total = 0.0;
    for mask in 0..patterns {
        let mut s = 0.0;
        for (i, &c) in coeffs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s -= c;
            } else {
                s += c;
            }
        }
        total += s.abs();
    }
    Ok(total / patterns as f64)
}

/// How to estimate the expected cube supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeMode {
    /// Per-block exact enumeration (blocks are independent, so the
    /// expectation splits as a sum). Requires every block within
    /// `EXACT_BLOCK_LIMIT`.
    Exact,
    /// Monte Carlo over seeded Rademacher draws.
    MonteCarlo { n_draws: u64, seed: u64 },
}

/// `E sup_{z in cube} |Q'| = E sum_j |S_j|`, exact or by Monte Carlo.
/// Exact mode reports stderr 0.
pub fn expected_cube_sup(decomp: &CubeDecomposition, mode: CubeMode) -> Result<McEstimate> {
    match mode {
        CubeMode::Exact => {
            let mut mean = 0.0;
            for b in decomp.blocks() {
                if b.coeffs.len() > EXACT_BLOCK_LIMIT {
                    return Err(Error::budget(format!(
                        "block j = {} has {} members; exact mode is capped at {EXACT_BLOCK_LIMIT}",
                        b.j,
                        b.coeffs.len()
                    )));
                }
                mean += mean_abs_sign_sum(&b.coeffs)?;
            }
            Ok(McEstimate { mean, stderr: 0.0, n_draws: 0, seed: 0 })
        }
        CubeMode::MonteCarlo { n_draws, seed } => {
            if n_draws == 0 {
                return Err(Error::domain("Monte Carlo cube mode requires n_draws >= 1"));
            }
            let values: Vec<f64> = (0..n_draws)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_stream_seed(seed, i));
                    let mut word = 0u64;
                    let mut bit = 64u32;
                    let mut total = 0.0;
                    for b in decomp.blocks() {
                        let mut s = 0.0;
                        for &c in &b.coeffs {
                            if bit == 64 {
                                word = rng.next_u64();
                                bit = 0;
                            }
                            s += if word >> bit & 1 == 1 { c } else { -c };
                            bit += 1;
                        }
                        total += s.abs();
                    }
                    total
                })
                .collect();
            Ok(mc_from_values(&values, n_draws, seed))
        }
    }
}

/// The Khintchine band `(c sum_j sqrt(m_j), sum_j sqrt(m_j))` with the
/// sharp lower constant `c = 2^{-1/2}`; the expected cube supremum lies in
/// the closed band.
pub fn khintchine_band(decomp: &CubeDecomposition) -> (f64, f64) {
    let upper = decomp.sum_sqrt_masses();
    (KHINTCHINE_LOWER * upper, upper)
}

/// Constant-free lower-bound functional
/// `sqrt(tau/ln tau * min(log+(N/p_tau), ln p_{floor(tau/2)}))`.
pub fn thm31b_value(n_max: u64, tau: usize, table: &PrimeTable) -> Result<f64> {
    if tau < 2 {
        return Err(Error::domain("thm31b_value requires tau >= 2"));
    }
    // tau beyond pi(N) degenerates gracefully: log+(N/p_tau) = 0.
    let p_tau = table.prime(tau)? as f64;
    let p_half = table.prime(tau / 2)? as f64;
    let log_plus = (n_max as f64 / p_tau).ln().max(0.0);
    let arg = log_plus.min(p_half.ln());
    Ok((tau as f64 / (tau as f64).ln() * arg).sqrt())
}
