//! Weight sequences d(n) and their cumulative characteristics.
//!
//! The profile tracks the summatory functions of d and d^2 together with
//! their normalized running maxima, which drive every predictor that
//! depends on the weight.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numtheory::{smallest_prime_factor_table, PrimeTable};

/// The golden-section constant `(sqrt 5 - 1)/4` separating the power-growth
/// regimes of the weight characteristics.
pub fn b_star() -> f64 {
    (5.0_f64.sqrt() - 1.0) / 4.0
}

/// A multiplicative weight prescribed by its prime-power values.
///
/// `rules[p][k-1] = d(p^k)`; exponents past the listed ones repeat the last
/// listed value, and primes without a rule take value 1 at every power (the
/// constant-one completion keeps the function multiplicative).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeWeight {
    rules: BTreeMap<u64, Vec<f64>>,
}

impl MultiplicativeWeight {
    pub fn new(rules: BTreeMap<u64, Vec<f64>>) -> Self {
        MultiplicativeWeight { rules }
    }

    /// Value at `p^k`, `k >= 1`.
    pub fn prime_power(&self, p: u64, k: u32) -> f64 {
        match self.rules.get(&p) {
            Some(v) if !v.is_empty() => {
                let idx = (k as usize - 1).min(v.len() - 1);
                v[idx]
            }
            _ => 1.0,
        }
    }
}

/// A weight sequence d(n).
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    /// d(n) = 1.
    Unit,
    /// Number-of-divisors function, d(1) = 1.
    Divisor,
    /// Von Mangoldt: log p when n = p^k, else 0 (so d(1) = 0).
    Mangoldt,
    /// Explicit values d(1..=len).
    Table(Vec<f64>),
    /// Multiplicative function from prescribed prime-power values, d(1) = 1.
    Multiplicative(MultiplicativeWeight),
}

impl WeightSpec {
    /// Short identifier used in CSV artifacts.
    pub fn id(&self) -> &'static str {
        match self {
            WeightSpec::Unit => "unit",
            WeightSpec::Divisor => "divisor",
            WeightSpec::Mangoldt => "mangoldt",
            WeightSpec::Table(_) => "table",
            WeightSpec::Multiplicative(_) => "multiplicative",
        }
    }

    /// Single value d(n), n >= 1.
    pub fn value(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::domain("weight value requires n >= 1"));
        }
        match self {
            WeightSpec::Unit => Ok(1.0),
            WeightSpec::Divisor => {
                let mut count = 1u64;
                for (_, a) in factor_trial(n) {
                    count *= (a + 1) as u64;
                }
                Ok(count as f64)
            }
            WeightSpec::Mangoldt => {
                let f = factor_trial(n);
                if f.len() == 1 {
                    Ok((f[0].0 as f64).ln())
                } else {
                    Ok(0.0)
                }
            }
            WeightSpec::Table(v) => {
                if n as usize > v.len() {
                    Err(Error::range(format!(
                        "table weight holds {} values, requested d({n})",
                        v.len()
                    )))
                } else {
                    Ok(v[n as usize - 1])
                }
            }
            WeightSpec::Multiplicative(mw) => {
                let mut prod = 1.0;
                for (p, a) in factor_trial(n) {
                    prod *= mw.prime_power(p, a);
                }
                Ok(prod)
            }
        }
    }

    /// Dense values `d(1..=n_max)`, indexed by n (entry 0 unused).
    pub fn values(&self, n_max: u64) -> Result<Vec<f64>> {
        if n_max == 0 {
            return Err(Error::domain("weight values require n_max >= 1"));
        }
        let len = n_max as usize + 1;
        match self {
            WeightSpec::Unit => {
                let mut v = vec![1.0; len];
                v[0] = 0.0;
                Ok(v)
            }
            WeightSpec::Divisor => {
                let d = divisor_counts(n_max);
                let mut v = vec![0.0; len];
                for n in 1..len {
                    v[n] = d[n] as f64;
                }
                Ok(v)
            }
            WeightSpec::Mangoldt => {
                let spf = smallest_prime_factor_table(n_max);
                let mut v = vec![0.0; len];
                for n in 2..len {
                    if spf[n] as usize == n {
                        // prime: start the p^k chain from here
                        let lp = (n as f64).ln();
                        let mut m = n;
                        loop {
                            v[m] = lp;
                            match m.checked_mul(n) {
                                Some(next) if next < len => m = next,
                                _ => break,
                            }
                        }
                    }
                }
                Ok(v)
            }
            WeightSpec::Table(t) => {
                if (n_max as usize) > t.len() {
                    return Err(Error::range(format!(
                        "table weight holds {} values, requested d(1..={n_max})",
                        t.len()
                    )));
                }
                let mut v = vec![0.0; len];
                v[1..].copy_from_slice(&t[..n_max as usize]);
                Ok(v)
            }
            WeightSpec::Multiplicative(mw) => {
                let spf = smallest_prime_factor_table(n_max);
                let mut v = vec![0.0; len];
                v[1] = 1.0;
                if len > 2 {
                    // reduced[n] = n with all factors of spf(n) removed;
                    // exp[n] = multiplicity of spf(n) in n.
                    let mut reduced = vec![0u32; len];
                    let mut exp = vec![0u8; len];
                    reduced[1] = 1;
                    for n in 2..len {
                        let p = spf[n] as usize;
                        let m = n / p;
                        if spf[m] == spf[n] && m > 1 {
                            exp[n] = exp[m] + 1;
                            reduced[n] = reduced[m];
                        } else {
                            exp[n] = 1;
                            reduced[n] = m as u32;
                        }
                        v[n] = v[reduced[n] as usize] * mw.prime_power(p as u64, exp[n] as u32);
                    }
                }
                Ok(v)
            }
        }
    }
}

/// Trial-division factorization into (prime, exponent) pairs, ascending.
fn factor_trial(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut rem = n;
    let mut d = 2u64;
    while d * d <= rem {
        if rem % d == 0 {
            let mut a = 0u32;
            while rem % d == 0 {
                a += 1;
                rem /= d;
            }
            out.push((d, a));
        }
        d += 1;
    }
    if rem > 1 {
        out.push((rem, 1));
    }
    out
}

/// Exact divisor-count table via a smallest-prime-factor sieve.
fn divisor_counts(n_max: u64) -> Vec<u32> {
    let len = n_max as usize + 1;
    let spf = smallest_prime_factor_table(n_max);
    let mut d = vec![0u32; len];
    let mut exp = vec![0u8; len];
    let mut reduced = vec![0u32; len.max(2)];
    if len > 1 {
        d[1] = 1;
        reduced[1] = 1;
    }
    for n in 2..len {
        let p = spf[n] as usize;
        let m = n / p;
        if m > 1 && spf[m] == spf[n] {
            exp[n] = exp[m] + 1;
            reduced[n] = reduced[m];
        } else {
            exp[n] = 1;
            reduced[n] = m as u32;
        }
        d[n] = d[reduced[n] as usize] * (exp[n] as u32 + 1);
    }
    d
}

/// Cumulative weight characteristics up to `m_max`:
/// prefix sums of d and d^2 and the running maxima of `D1(m)/m` and
/// `sqrt(D2(m)/m)`. All arrays are 1-based via the accessors.
#[derive(Debug, Clone)]
pub struct WeightProfile {
    d1: Vec<f64>,
    d2: Vec<f64>,
    d1_tilde: Vec<f64>,
    d2_tilde: Vec<f64>,
}

impl WeightProfile {
    pub fn m_max(&self) -> u64 {
        self.d1.len() as u64
    }

    pub fn d1(&self, m: u64) -> f64 {
        self.d1[m as usize - 1]
    }

    pub fn d2(&self, m: u64) -> f64 {
        self.d2[m as usize - 1]
    }

    pub fn d1_tilde(&self, m: u64) -> f64 {
        self.d1_tilde[m as usize - 1]
    }

    pub fn d2_tilde(&self, m: u64) -> f64 {
        self.d2_tilde[m as usize - 1]
    }
}

/// Compute the four profile arrays in one pass.
///
/// The divisor weight accumulates D1 and D2 in exact integer arithmetic
/// before converting, so the running maxima are drift-free.
pub fn cumulative_profile(spec: &WeightSpec, m_max: u64) -> Result<WeightProfile> {
    if m_max == 0 {
        return Err(Error::domain("cumulative_profile requires M >= 1"));
    }
    let len = m_max as usize;
    let mut d1 = vec![0.0; len];
    let mut d2 = vec![0.0; len];
    let mut d1_tilde = vec![0.0; len];
    let mut d2_tilde = vec![0.0; len];

    let mut max1 = f64::NEG_INFINITY;
    let mut max2 = f64::NEG_INFINITY;
    match spec {
        WeightSpec::Divisor => {
            let d = divisor_counts(m_max);
            let mut s1: u64 = 0;
            let mut s2: u64 = 0;
            for m in 1..=len {
                let dm = d[m] as u64;
                s1 += dm;
                s2 += dm * dm;
                d1[m - 1] = s1 as f64;
                d2[m - 1] = s2 as f64;
                max1 = max1.max(d1[m - 1] / m as f64);
                max2 = max2.max(d2[m - 1] / m as f64);
                d1_tilde[m - 1] = max1;
                d2_tilde[m - 1] = max2.sqrt();
            }
        }
        _ => {
            let vals = spec.values(m_max)?;
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            for m in 1..=len {
                let dm = vals[m];
                s1 += dm;
                s2 += dm * dm;
                d1[m - 1] = s1;
                d2[m - 1] = s2;
                max1 = max1.max(s1 / m as f64);
                max2 = max2.max(s2 / m as f64);
                d1_tilde[m - 1] = max1;
                d2_tilde[m - 1] = max2.sqrt();
            }
        }
    }
    Ok(WeightProfile { d1, d2, d1_tilde, d2_tilde })
}

/// Smallest constant C with `d(k p^j) <= C d(k) j^H` over all k >= 2,
/// primes p and j >= 1 with `k p^j <= n_max`. Returns infinity when some
/// d(k) = 0 meets d(k p^j) != 0.
///
/// k = 1 is excluded: the von Mangoldt weight has d(1) = 0 while
/// d(p^j) != 0, which would make every C fail on a term the downstream
/// estimates never use.
pub fn growth_condition_scan(
    spec: &WeightSpec,
    h: f64,
    n_max: u64,
    table: &PrimeTable,
) -> Result<f64> {
    if h < 0.0 {
        return Err(Error::domain("growth_condition_scan requires H >= 0"));
    }
    if n_max < 4 {
        // no k >= 2, j >= 1 with k p^j <= N: the scan range is empty
        return Ok(0.0);
    }
    if table.limit() < n_max / 2 {
        return Err(Error::range(format!(
            "growth scan to {n_max} needs primes up to {}",
            n_max / 2
        )));
    }
    let d = spec.values(n_max)?;
    let mut c = 0.0_f64;
    for &p in table.primes() {
        if p > n_max / 2 {
            break;
        }
        let mut pj = p;
        let mut j = 1u32;
        while pj <= n_max / 2 {
            let jh = (j as f64).powf(h);
            for k in 2..=(n_max / pj) {
                let num = d[(k * pj) as usize];
                if num <= 0.0 {
                    continue;
                }
                let den = d[k as usize];
                if den <= 0.0 {
                    return Ok(f64::INFINITY);
                }
                c = c.max(num / (den * jh));
            }
            j += 1;
            pj = match pj.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }
    Ok(c)
}

/// Empirical power-growth constant for the weight characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerGrowthReport {
    /// max over the given M of `D2_tilde(M) / M^b`.
    pub constant: f64,
    /// The critical exponent `(sqrt 5 - 1)/4`.
    pub b_star: f64,
}

/// Scan `D2_tilde(M) / M^b` over a list of checkpoints.
pub fn power_growth_check(
    spec: &WeightSpec,
    b: f64,
    m_list: &[u64],
) -> Result<PowerGrowthReport> {
    if b < 0.0 {
        return Err(Error::domain("power_growth_check requires b >= 0"));
    }
    if m_list.is_empty() {
        return Err(Error::domain("power_growth_check needs at least one M"));
    }
    let m_top = *m_list.iter().max().unwrap();
    let profile = cumulative_profile(spec, m_top)?;
    let mut constant = 0.0_f64;
    for &m in m_list {
        if m == 0 {
            return Err(Error::domain("power_growth_check checkpoints must be >= 1"));
        }
        constant = constant.max(profile.d2_tilde(m) / (m as f64).powf(b));
    }
    Ok(PowerGrowthReport { constant, b_star: b_star() })
}
