//! Constant-free theoretical predictors and numeric checks of the
//! intermediate estimates behind them.
//!
//! Every function strips the unspecified absolute constants: callers
//! compare measured quantities against these functionals as ratios, never
//! as pass/fail against an invented constant.

use crate::error::{Error, Result};
use crate::numtheory::PrimeTable;
use crate::weights::{b_star, cumulative_profile, WeightSpec};

/// `log+(x) = max(ln x, 0)`.
pub fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// A named predictor value with its parameter echo.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictor {
    pub name: String,
    pub value: f64,
    pub n: Option<u64>,
    pub sigma: Option<f64>,
    pub tau: Option<usize>,
    pub b: Option<f64>,
    pub weight: Option<String>,
}

impl Predictor {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Predictor {
            name: name.into(),
            value,
            n: None,
            sigma: None,
            tau: None,
            b: None,
            weight: None,
        }
    }
}

/// `N / ln N`.
pub fn halasz_predictor(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("halasz_predictor requires N >= 2"));
    }
    Ok(n as f64 / (n as f64).ln())
}

/// `N^{1-sigma} / ln N`.
pub fn queffelec_predictor(n: u64, sigma: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("queffelec_predictor requires N >= 2"));
    }
    if !(0.0..=0.5).contains(&sigma) {
        return Err(Error::domain(format!("sigma = {sigma} outside [0, 1/2]")));
    }
    let nf = n as f64;
    Ok(nf.powf(1.0 - sigma) / nf.ln())
}

/// `N^{1-sigma} D2_tilde(N) / ln N`.
pub fn thm1_predictor(n: u64, sigma: f64, weight: &WeightSpec) -> Result<f64> {
    let base = queffelec_predictor(n, sigma)?;
    let profile = cumulative_profile(weight, n)?;
    Ok(base * profile.d2_tilde(n))
}

/// The improved exponent `r(b) = b + (2b + 3) / (4 (1 + b))` on
/// `[b_*, 1/2)`; `r(b_*) = 1` exactly by the defining quadratic of `b_*`.
pub fn remark1_exponent(b: f64) -> Result<f64> {
    if !(b >= b_star() && b < 0.5) {
        return Err(Error::domain(format!(
            "remark1_exponent requires b in [b_*, 1/2), got {b}"
        )));
    }
    Ok(b + (2.0 * b + 3.0) / (4.0 * (1.0 + b)))
}

/// Which branch of the three-regime upper functional applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm31aRegime {
    /// `tau >= (N lnln N)^{1/2}`: value `(tau/ln tau * log+(N/p_tau))^{1/2}`.
    LargeTau,
    /// middle band: value `(N lnln N)^{1/4}`.
    MiddleTau,
    /// `tau <= (N lnln N)^{1/2} / ln N`: value `(tau ln N)^{1/2}`.
    SmallTau,
}

impl Thm31aRegime {
    pub fn tag(&self) -> &'static str {
        match self {
            Thm31aRegime::LargeTau => "regime1",
            Thm31aRegime::MiddleTau => "regime2",
            Thm31aRegime::SmallTau => "regime3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm31aBound {
    pub value: f64,
    pub regime: Thm31aRegime,
}

/// Three-regime constant-free upper functional for the smooth-capped
/// polynomial at the critical abscissa. Requires `N >= 16` so `lnln N > 0`.
pub fn thm31a_upper(n: u64, tau: usize, table: &PrimeTable) -> Result<Thm31aBound> {
    if n < 16 {
        return Err(Error::domain("thm31a_upper requires N >= 16"));
    }
    let pi_n = table.prime_pi(n)?;
    if tau == 0 || tau > pi_n {
        return Err(Error::domain(format!(
            "thm31a_upper needs 1 <= tau <= pi(N) = {pi_n}, got {tau}"
        )));
    }
    let nf = n as f64;
    let lnln = nf.ln().ln();
    let split_hi = (nf * lnln).sqrt();
    let split_lo = split_hi / nf.ln();
    let tf = tau as f64;
    let bound = if tf >= split_hi {
        let p_tau = table.prime(tau)? as f64;
        Thm31aBound {
            value: (tf / tf.ln() * log_plus(nf / p_tau)).sqrt(),
            regime: Thm31aRegime::LargeTau,
        }
    } else if tf >= split_lo {
        Thm31aBound { value: (nf * lnln).powf(0.25), regime: Thm31aRegime::MiddleTau }
    } else {
        Thm31aBound { value: (tf * nf.ln()).sqrt(), regime: Thm31aRegime::SmallTau }
    };
    Ok(bound)
}

/// Empirical constant of the prime-sum estimate:
/// `[sum_{j <= pi(N)} p_j^{-1/2} (N/p_j)^b] / (N^{1/2} / ln N)`.
pub fn lemma22_ratio(b: f64, n: u64, table: &PrimeTable) -> Result<f64> {
    if !(0.0..0.5).contains(&b) {
        return Err(Error::domain(format!("lemma22_ratio requires 0 <= b < 1/2, got {b}")));
    }
    if n < 10 {
        return Err(Error::domain("lemma22_ratio requires N >= 10"));
    }
    if table.limit() < n {
        return Err(Error::range(format!("lemma22_ratio needs primes up to {n}")));
    }
    let nf = n as f64;
    let mut sum = 0.0;
    for &p in table.primes() {
        if p > n {
            break;
        }
        let pf = p as f64;
        sum += pf.powf(-0.5) * (nf / pf).powf(b);
    }
    Ok(sum / (nf.sqrt() / nf.ln()))
}

/// One row of the coefficient profile: `K_m` and its ratio against the
/// closed-form bound (None when the bound degenerates or d(m) = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmEntry {
    pub m: u64,
    pub km: f64,
    pub ratio: Option<f64>,
}

/// Coefficients `K_m^2 = sum_{nu < j <= tau, m p_j <= N} d(m)^2 (m p_j)^{-2 sigma}`
/// for `m <= N/p_nu`, with the bound ratio
/// `K_m / [d(m) N^{-sigma} (N/m)^{1/2} ln(N/m)^{-1/2}]` for `sigma < 1/2`
/// and `K_m / [d(m) m^{-1/2} (lnln(N/m))^{1/2}]` at `sigma = 1/2`.
pub fn km_profile(
    n: u64,
    sigma: f64,
    nu: usize,
    tau: usize,
    weight: &WeightSpec,
    table: &PrimeTable,
) -> Result<Vec<KmEntry>> {
    if nu == 0 || nu >= tau {
        return Err(Error::domain(format!(
            "km_profile requires 1 <= nu < tau, got nu = {nu}, tau = {tau}"
        )));
    }
    if !(0.0..=0.5).contains(&sigma) {
        return Err(Error::domain(format!("sigma = {sigma} outside [0, 1/2]")));
    }
    let pi_n = table.prime_pi(n)?;
    if tau > pi_n {
        return Err(Error::range(format!(
            "km_profile needs tau <= pi(N) = {pi_n}, got {tau}"
        )));
    }
    let m_max = n / table.prime(nu)?;
    let d = weight.values(m_max)?;
    let nf = n as f64;

    // prefix sums of p_j^{-2 sigma} over j in (nu, tau]
    let mut prefix = Vec::with_capacity(tau - nu + 1);
    prefix.push(0.0);
    for j in nu + 1..=tau {
        let p = table.prime(j)? as f64;
        prefix.push(prefix.last().unwrap() + p.powf(-2.0 * sigma));
    }

    let mut out = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let mf = m as f64;
        // largest admissible j: nu < j <= tau with p_j <= N/m
        let cap = n / m;
        let hi = {
            let primes = table.primes();
            let uppermost = primes[nu..tau].partition_point(|&p| p <= cap);
            uppermost // count of admissible j in (nu, tau]
        };
        let sum_p = prefix[hi];
        let km = d[m as usize].abs() * mf.powf(-sigma) * sum_p.sqrt();
        let ratio = if d[m as usize] == 0.0 || km == 0.0 {
            None
        } else if sigma < 0.5 {
            let denom = d[m as usize].abs()
                * nf.powf(-sigma)
                * (nf / mf).sqrt()
                * (nf / mf).ln().powf(-0.5);
            Some(km / denom)
        } else {
            let lnln = (nf / mf).ln().ln();
            if lnln <= 0.0 {
                None
            } else {
                Some(km / (d[m as usize].abs() * mf.powf(-0.5) * lnln.sqrt()))
            }
        };
        out.push(KmEntry { m, km, ratio });
    }
    Ok(out)
}

/// Summation-by-parts constant: for `sigma < 1/2`
/// `[sum_{m <= M} d(m)^2 m^{-2 sigma}] / [D2_tilde^2(M) M^{1-2 sigma}]`,
/// and with `ln M` replacing `M^{1-2 sigma}` at `sigma = 1/2`.
pub fn abel_ratio(weight: &WeightSpec, sigma: f64, m_max: u64) -> Result<f64> {
    if m_max < 2 {
        return Err(Error::domain("abel_ratio requires M >= 2"));
    }
    if !(0.0..=0.5).contains(&sigma) {
        return Err(Error::domain(format!("sigma = {sigma} outside [0, 1/2]")));
    }
    let d = weight.values(m_max)?;
    let profile = cumulative_profile(weight, m_max)?;
    let mut sum = 0.0;
    for m in 1..=m_max {
        let dm = d[m as usize];
        sum += dm * dm * (m as f64).powf(-2.0 * sigma);
    }
    let d2t = profile.d2_tilde(m_max);
    let mf = m_max as f64;
    let denom = if sigma < 0.5 {
        d2t * d2t * mf.powf(1.0 - 2.0 * sigma)
    } else {
        d2t * d2t * mf.ln()
    };
    Ok(sum / denom)
}

/// `p_j / (j ln j)`, the ratio against the leading prime asymptotic.
pub fn pj_asymptotic_ratio(j: usize, table: &PrimeTable) -> Result<f64> {
    if j < 2 {
        return Err(Error::domain("pj_asymptotic_ratio requires j >= 2"));
    }
    let p = table.prime(j)? as f64;
    let jf = j as f64;
    Ok(p / (jf * jf.ln()))
}

/// How the split point was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuRationale {
    /// `sqrt N` clamped into the wide admissible range
    /// `[ln^2 N / lnln^2 N, N / ln^2 N]`.
    VastRange,
    /// `N^{1/(2(b+1))}` under a power-growth assumption on the weight.
    PowerRule,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuBalance {
    pub nu: u64,
    pub rationale: NuRationale,
    /// The balance exponent `(4b^2 + 2b - 1) / (4(b + 1))`; negative
    /// exactly when `b < b_*`.
    pub comp: Option<f64>,
}

/// Balanced split index: without `b`, clamp `sqrt N` into the admissible
/// range; with `b < 1/2`, use `nu = round(N^{h})`, `h = 1/(2(b+1))`, and
/// report the balance exponent.
pub fn nu_balance(n: u64, b: Option<f64>) -> Result<NuBalance> {
    if n < 16 {
        return Err(Error::domain("nu_balance requires N >= 16"));
    }
    let nf = n as f64;
    match b {
        None => {
            let ln = nf.ln();
            let lnln = ln.ln();
            let lo = ln * ln / (lnln * lnln);
            let hi = nf / (ln * ln);
            let nu = nf.sqrt().clamp(lo, hi.max(lo)).round() as u64;
            Ok(NuBalance { nu, rationale: NuRationale::VastRange, comp: None })
        }
        Some(b) => {
            if b >= 0.5 {
                return Err(Error::domain(format!("nu_balance requires b < 1/2, got {b}")));
            }
            let h = 1.0 / (2.0 * (b + 1.0));
            let nu = nf.powf(h).round() as u64;
            let comp = (4.0 * b * b + 2.0 * b - 1.0) / (4.0 * (b + 1.0));
            Ok(NuBalance { nu, rationale: NuRationale::PowerRule, comp: Some(comp) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::sieve_primes;

    #[test]
    fn halasz_examples() {
        let v = halasz_predictor(1024).unwrap();
        assert!((v - 1024.0 / 1024.0_f64.ln()).abs() < 1e-12);
        assert!((v - 147.73).abs() < 0.01);
        assert!(matches!(halasz_predictor(1), Err(Error::Domain(_))));
        // e^2 at the nearest integer 7: the closed form is N / ln N
        let v = halasz_predictor(7).unwrap();
        assert!((v - 7.0 / 7.0_f64.ln()).abs() < 1e-12);
        // strictly increasing for N >= 3
        let mut prev = halasz_predictor(3).unwrap();
        for n in 4..200 {
            let cur = halasz_predictor(n).unwrap();
            assert!(cur > prev);
            prev = cur;
        }
    }

    #[test]
    fn queffelec_examples() {
        assert_eq!(
            queffelec_predictor(500, 0.0).unwrap(),
            halasz_predictor(500).unwrap()
        );
        let v = queffelec_predictor(10_000, 0.5).unwrap();
        assert!((v - 100.0 / 10_000.0_f64.ln()).abs() < 1e-10);
        assert!((v - 10.857).abs() < 1e-3);
        // decreasing in sigma
        let a = queffelec_predictor(1000, 0.1).unwrap();
        let b = queffelec_predictor(1000, 0.3).unwrap();
        assert!(a > b);
    }

    #[test]
    fn thm1_unit_reduces_to_queffelec() {
        for n in [16u64, 100, 5_000] {
            for sigma in [0.0, 0.25, 0.5] {
                let a = thm1_predictor(n, sigma, &WeightSpec::Unit).unwrap();
                let b = queffelec_predictor(n, sigma).unwrap();
                assert!((a - b).abs() < 1e-12 * b);
            }
        }
    }

    #[test]
    fn thm1_divisor_uses_profile() {
        let n = 10_000u64;
        let p = cumulative_profile(&WeightSpec::Divisor, n).unwrap();
        let v = thm1_predictor(n, 0.0, &WeightSpec::Divisor).unwrap();
        let expect = n as f64 * p.d2_tilde(n) / (n as f64).ln();
        assert!((v - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn remark1_exponent_examples() {
        // r(b_*) = 1 exactly (up to rounding of b_*)
        let r = remark1_exponent(b_star()).unwrap();
        assert!((r - 1.0).abs() < 1e-14, "r(b_*) = {r}");
        let r = remark1_exponent(0.4).unwrap();
        assert!((r - 1.0786).abs() < 1e-4);
        // r(b) < 1 + b on the interval
        let mut b = b_star() + 1e-6;
        while b < 0.5 {
            let r = remark1_exponent(b).unwrap();
            assert!(r < 1.0 + b);
            b += 0.01;
        }
        assert!(matches!(remark1_exponent(0.5), Err(Error::Domain(_))));
        assert!(matches!(remark1_exponent(0.2), Err(Error::Domain(_))));
    }

    #[test]
    fn thm31a_regimes() {
        let table = sieve_primes(1_000_000);
        let b = thm31a_upper(1_000_000, 1000, &table).unwrap();
        assert_eq!(b.regime, Thm31aRegime::MiddleTau);
        let lnln = 1e6_f64.ln().ln();
        assert!((b.value - (1e6 * lnln).powf(0.25)).abs() < 1e-9);
        assert!((b.value - 40.3).abs() < 0.1);

        let b = thm31a_upper(1_000_000, 50, &table).unwrap();
        assert_eq!(b.regime, Thm31aRegime::SmallTau);
        assert!((b.value - (50.0 * 1e6_f64.ln()).sqrt()).abs() < 1e-9);
        assert!((b.value - 26.3).abs() < 0.1);

        let b = thm31a_upper(1_000_000, 2_000, &table).unwrap();
        assert_eq!(b.regime, Thm31aRegime::LargeTau);

        assert!(matches!(thm31a_upper(8, 1, &table), Err(Error::Domain(_))));
    }

    #[test]
    fn lemma22_specialization_at_zero() {
        let table = sieve_primes(10_000);
        let n = 10_000u64;
        let r = lemma22_ratio(0.0, n, &table).unwrap();
        let direct: f64 = table
            .primes()
            .iter()
            .map(|&p| (p as f64).powf(-0.5))
            .sum::<f64>();
        let expect = (n as f64).ln() * direct / (n as f64).sqrt();
        assert!((r - expect).abs() < 1e-10 * expect);
        assert!(matches!(lemma22_ratio(0.5, n, &table), Err(Error::Domain(_))));
    }

    #[test]
    fn km_profile_examples() {
        let table = sieve_primes(200);
        // sigma = 0, unit: K_1^2 counts the admissible primes
        let entries = km_profile(100, 0.0, 2, 25, &WeightSpec::Unit, &table).unwrap();
        let k1 = entries[0];
        assert_eq!(k1.m, 1);
        assert!((k1.km - 23.0_f64.sqrt()).abs() < 1e-12);
        // m beyond every admissible product: K_m = 0
        // (m_max = N/p_2 = 33; N/33 = 3 < p_3 = 5, so no admissible prime)
        let last = entries.last().unwrap();
        assert_eq!(last.m, 33);
        assert_eq!(last.km, 0.0);
        assert!(last.ratio.is_none());
        assert!(matches!(
            km_profile(100, 0.0, 5, 5, &WeightSpec::Unit, &table),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn km_sigma_zero_specialization() {
        let table = sieve_primes(2_000);
        let entries = km_profile(1_000, 0.0, 3, 50, &WeightSpec::Divisor, &table).unwrap();
        let d = WeightSpec::Divisor.values(1_000).unwrap();
        for e in entries.iter().take(40) {
            // K_m^2 = d(m)^2 * #{j in (nu, tau]: p_j <= N/m}
            let cap = 1_000 / e.m;
            let count = table.primes()[3..50].iter().filter(|&&p| p <= cap).count();
            let expect = d[e.m as usize] * (count as f64).sqrt();
            assert!((e.km - expect).abs() < 1e-9, "m = {}", e.m);
        }
    }

    #[test]
    fn abel_ratio_examples() {
        let r = abel_ratio(&WeightSpec::Unit, 0.0, 1_000).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let r = abel_ratio(&WeightSpec::Divisor, 0.25, 10_000).unwrap();
        assert!(r.is_finite() && r > 0.0 && r <= 4.0, "got {r}");
        let r = abel_ratio(&WeightSpec::Mangoldt, 0.5, 10_000).unwrap();
        assert!(r.is_finite() && r > 0.0, "got {r}");
    }

    #[test]
    fn pj_ratio_examples() {
        let table = sieve_primes(600);
        let r = pj_asymptotic_ratio(10, &table).unwrap();
        assert!((r - 29.0 / (10.0 * 10.0_f64.ln())).abs() < 1e-12);
        assert!((r - 1.259).abs() < 1e-3);
        let r = pj_asymptotic_ratio(100, &table).unwrap();
        assert!((r - 541.0 / (100.0 * 100.0_f64.ln())).abs() < 1e-12);
        assert!((r - 1.175).abs() < 1e-3);
        assert!(matches!(pj_asymptotic_ratio(1, &table), Err(Error::Domain(_))));
    }

    #[test]
    fn nu_balance_examples() {
        // h(0) = 1/2
        let nb = nu_balance(10_000, Some(0.0)).unwrap();
        assert_eq!(nb.nu, 100);
        assert_eq!(nb.rationale, NuRationale::PowerRule);
        // comp vanishes at b_*
        let nb = nu_balance(1_000, Some(b_star())).unwrap();
        assert!(nb.comp.unwrap().abs() < 1e-14);
        // N = 1e6, b = 0.25: nu = round(10^{2.4})
        let nb = nu_balance(1_000_000, Some(0.25)).unwrap();
        assert_eq!(nb.nu, 251);
        // without b: clamped sqrt
        let nb = nu_balance(1_000_000, None).unwrap();
        assert_eq!(nb.rationale, NuRationale::VastRange);
        assert_eq!(nb.nu, 1_000);
        assert!(matches!(nu_balance(100, Some(0.6)), Err(Error::Domain(_))));
        assert!(matches!(nu_balance(8, None), Err(Error::Domain(_))));
    }
}
