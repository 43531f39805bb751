//! Primes, exponent-vector factorizations, and the index-set decompositions
//! (largest-prime-factor classes, smooth sets, and the paired blocks used by
//! the discrete-cube process).
//!
//! Prime indices are 1-based throughout: `p_1 = 2, p_2 = 3, ...`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Ascending table of all primes up to a fixed limit (plain Eratosthenes
/// bit sieve).
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

#[inline]
fn bit_get(bits: &[u64], i: usize) -> bool {
    bits[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
fn bit_set(bits: &mut [u64], i: usize) {
    bits[i >> 6] |= 1 << (i & 63);
}

impl PrimeTable {
    /// Sieve all primes up to `limit`. A limit below 2 yields an empty table.
    pub fn new(limit: u64) -> Self {
        let mut primes = Vec::new();
        if limit >= 2 {
            let n = limit as usize;
            let mut composite = vec![0u64; n / 64 + 1];
            let mut i = 2usize;
            while i * i <= n {
                if !bit_get(&composite, i) {
                    let mut m = i * i;
                    while m <= n {
                        bit_set(&mut composite, m);
                        m += i;
                    }
                }
                i += 1;
            }
            for k in 2..=n {
                if !bit_get(&composite, k) {
                    primes.push(k as u64);
                }
            }
        }
        PrimeTable { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of primes in the table.
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The j-th prime, 1-based (`prime(1) = 2`).
    pub fn prime(&self, j: usize) -> Result<u64> {
        if j == 0 || j > self.primes.len() {
            return Err(Error::range(format!(
                "prime index {j} outside table of {} primes",
                self.primes.len()
            )));
        }
        Ok(self.primes[j - 1])
    }

    /// Count of primes `<= n`. Errors when `n` exceeds the sieved limit.
    pub fn prime_pi(&self, n: u64) -> Result<usize> {
        if n > self.limit {
            return Err(Error::range(format!(
                "prime_pi({n}) exceeds table limit {}",
                self.limit
            )));
        }
        Ok(self.primes.partition_point(|&p| p <= n))
    }
}

/// Convenience constructor mirroring the operation name.
pub fn sieve_primes(limit: u64) -> PrimeTable {
    PrimeTable::new(limit)
}

/// Prime-exponent vector `a(n)`: the source integer is `prod p_j^{a_j}` over
/// the first `tau` primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    exps: Vec<u32>,
}

impl ExponentVector {
    pub fn zero(tau: usize) -> Self {
        ExponentVector { exps: vec![0; tau] }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        ExponentVector { exps }
    }

    pub fn tau(&self) -> usize {
        self.exps.len()
    }

    /// Exponent of `p_j`, 1-based `j`.
    pub fn exponent(&self, j: usize) -> u32 {
        self.exps[j - 1]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Rebuild the source integer `prod p_j^{a_j}`.
    pub fn reconstruct(&self, table: &PrimeTable) -> Result<u64> {
        let mut n: u64 = 1;
        for (idx, &a) in self.exps.iter().enumerate() {
            let p = table.prime(idx + 1)?;
            for _ in 0..a {
                n = n.checked_mul(p).ok_or_else(|| {
                    Error::range("exponent vector reconstruction overflows u64".to_string())
                })?;
            }
        }
        Ok(n)
    }
}

/// Factor `n` over the first `tau` primes. Errors when `n` has a prime
/// factor above `p_tau`, naming the offending factor.
pub fn factor_exponents(n: u64, tau: usize, table: &PrimeTable) -> Result<ExponentVector> {
    if n == 0 {
        return Err(Error::domain("factor_exponents requires n >= 1"));
    }
    if tau > table.len() {
        return Err(Error::range(format!(
            "tau = {tau} exceeds table of {} primes",
            table.len()
        )));
    }
    let mut exps = vec![0u32; tau];
    let mut rem = n;
    for (idx, &p) in table.primes()[..tau].iter().enumerate() {
        if p.saturating_mul(p) > rem {
            break;
        }
        while rem % p == 0 {
            exps[idx] += 1;
            rem /= p;
        }
    }
    if rem > 1 {
        let bound = if tau == 0 { 1 } else { table.primes()[tau - 1] };
        if rem <= bound {
            // All factors below sqrt(rem) were removed, so rem is prime.
            let j = table.primes()[..tau]
                .binary_search(&rem)
                .expect("residual below p_tau must be prime");
            exps[j] += 1;
        } else {
            return Err(Error::Smoothness { n, factor: smallest_factor(rem) });
        }
    }
    Ok(ExponentVector { exps })
}

fn smallest_factor(m: u64) -> u64 {
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            return d;
        }
        d += 1;
    }
    m
}

/// Largest prime divisor `P+(n)`, with the convention `P+(1) = 1`.
pub fn largest_prime_factor(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("largest_prime_factor requires n >= 1"));
    }
    let mut rem = n;
    let mut largest = 1u64;
    let mut d = 2u64;
    while d * d <= rem {
        if rem % d == 0 {
            largest = d;
            while rem % d == 0 {
                rem /= d;
            }
        }
        d += 1;
    }
    if rem > 1 {
        largest = rem;
    }
    Ok(largest)
}

/// Table of 1-based prime indices of `P+(n)` for `n in [0, n_max]`;
/// entries for `n < 2` are 0.
pub(crate) fn largest_prime_index_table(n_max: u64, table: &PrimeTable) -> Result<Vec<u32>> {
    if n_max > table.limit() {
        return Err(Error::range(format!(
            "largest-prime index table to {n_max} needs a sieve past {}",
            table.limit()
        )));
    }
    let n = n_max as usize;
    let mut idx = vec![0u32; n + 1];
    for (j, &p) in table.primes().iter().enumerate() {
        if p > n_max {
            break;
        }
        let mut m = p as usize;
        while m <= n {
            idx[m] = (j + 1) as u32;
            m += p as usize;
        }
    }
    Ok(idx)
}

/// Smallest-prime-factor table for `n in [0, n_max]`; entries for `n < 2`
/// are 0. Backs the bulk factorizations and weight sieves.
pub(crate) fn smallest_prime_factor_table(n_max: u64) -> Vec<u32> {
    let n = n_max as usize;
    let mut spf = vec![0u32; n + 1];
    let mut i = 2usize;
    while i <= n {
        if spf[i] == 0 {
            let mut m = i;
            while m <= n {
                if spf[m] == 0 {
                    spf[m] = i as u32;
                }
                m += i;
            }
        }
        i += 1;
    }
    spf
}

/// A family of pairwise disjoint index sets keyed by prime index `j`.
#[derive(Debug, Clone)]
pub struct IndexPartition {
    n_max: u64,
    sets: BTreeMap<usize, Vec<u64>>,
}

impl IndexPartition {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn sets(&self) -> &BTreeMap<usize, Vec<u64>> {
        &self.sets
    }

    pub fn set(&self, j: usize) -> Option<&[u64]> {
        self.sets.get(&j).map(|v| v.as_slice())
    }

    /// Total number of elements across all sets.
    pub fn total_len(&self) -> usize {
        self.sets.values().map(|v| v.len()).sum()
    }
}

/// Partition of `{2..N}` into classes with `P+(n) = p_j` exactly.
pub fn e_partition(n_max: u64, table: &PrimeTable) -> Result<IndexPartition> {
    if n_max < 2 {
        return Err(Error::domain("e_partition requires N >= 2"));
    }
    let idx = largest_prime_index_table(n_max, table)?;
    let mut sets: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for m in 2..=n_max {
        sets.entry(idx[m as usize] as usize).or_default().push(m);
    }
    Ok(IndexPartition { n_max, sets })
}

/// The `p_tau`-smooth integers in `[2, N]`, sorted ascending.
pub fn smooth_set(n_max: u64, tau: usize, table: &PrimeTable) -> Result<Vec<u64>> {
    if n_max < 2 {
        return Err(Error::domain("smooth_set requires N >= 2"));
    }
    let pi_n = table.prime_pi(n_max)?;
    if tau == 0 || tau > pi_n {
        return Err(Error::range(format!(
            "smooth_set needs 1 <= tau <= pi(N) = {pi_n}, got tau = {tau}"
        )));
    }
    let idx = largest_prime_index_table(n_max, table)?;
    Ok((2..=n_max)
        .filter(|&m| idx[m as usize] as usize <= tau)
        .collect())
}

/// Blocks `L_j = { p_j * m : m <= N/p_j, P+(m) <= p_{floor(tau/2)} }` for
/// `j in (floor(tau/2), tau]`. Blocks with `p_j > N` come out empty.
///
/// `m = 1` is admitted (`P+(1) = 1`), so `p_j` itself belongs to `L_j`
/// whenever `p_j <= N`. For odd `tau` the block range uses integer
/// boundaries `floor(tau/2) + 1 ..= tau`.
pub fn l_sets(n_max: u64, tau: usize, table: &PrimeTable) -> Result<IndexPartition> {
    if n_max < 2 {
        return Err(Error::domain("l_sets requires N >= 2"));
    }
    if tau < 2 {
        return Err(Error::domain("l_sets requires tau >= 2"));
    }
    if tau > table.len() {
        return Err(Error::range(format!(
            "l_sets needs {tau} primes but the table holds {}",
            table.len()
        )));
    }
    let half = tau / 2;
    // Largest cofactor bound across blocks: N / p_{half+1}.
    let cofactor_max = n_max / table.prime(half + 1)?;
    let idx = largest_prime_index_table(cofactor_max, table)?;
    let mut sets: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for j in (half + 1)..=tau {
        let p = table.prime(j)?;
        let mut members = Vec::new();
        if p <= n_max {
            let m_max = n_max / p;
            for m in 1..=m_max {
                if idx[m as usize] as usize <= half {
                    members.push(p * m);
                }
            }
        }
        sets.insert(j, members);
    }
    Ok(IndexPartition { n_max, sets })
}
