//! The random Dirichlet polynomial, its lift to the torus, and pointwise
//! evaluation on the line and on the torus.
//!
//! The lift sends the term `n^{-it}` to the torus character
//! `e^{2 pi i <a(n), z>}` through the prime-exponent vector `a(n)`; on the
//! curve `z_j(t) = frac(-t ln p_j / 2 pi)` the two evaluations coincide
//! exactly, which the tests assert rather than assume.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU as TWO_PI;

use crate::error::{Error, Result};
use crate::numtheory::{smallest_prime_factor_table, PrimeTable};
use crate::weights::WeightSpec;

/// The random Dirichlet polynomial family: length, abscissa, weight, and
/// the optional smoothness cap restricting the index set to `{1} + E_tau(N)`.
#[derive(Debug, Clone)]
pub struct PolynomialSpec {
    pub n_max: u64,
    pub sigma: f64,
    pub weight: WeightSpec,
    pub smooth_cap: Option<usize>,
    pub include_unit: bool,
}

impl PolynomialSpec {
    /// Plain family over `{1..N}` with the unit term included.
    pub fn new(n_max: u64, sigma: f64, weight: WeightSpec) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::domain("polynomial needs N >= 1"));
        }
        if !(0.0..=0.5).contains(&sigma) {
            return Err(Error::domain(format!("sigma = {sigma} outside [0, 1/2]")));
        }
        Ok(PolynomialSpec { n_max, sigma, weight, smooth_cap: None, include_unit: true })
    }

    pub fn with_smooth_cap(mut self, tau: usize) -> Self {
        self.smooth_cap = Some(tau);
        self
    }

    pub fn without_unit(mut self) -> Self {
        self.include_unit = false;
        self
    }

    /// The effective index set: `{1}` (when the unit term is on) together
    /// with `[2, N]`, restricted to `p_tau`-smooth integers under a cap.
    pub fn index_set(&self, table: &PrimeTable) -> Result<Vec<u64>> {
        let mut set = Vec::new();
        if self.include_unit {
            set.push(1);
        }
        match self.smooth_cap {
            Some(tau) => {
                let pi_n = table.prime_pi(self.n_max)?;
                if tau == 0 || tau > pi_n {
                    return Err(Error::range(format!(
                        "smooth cap tau = {tau} outside 1..=pi(N) = {pi_n}"
                    )));
                }
                set.extend(crate::numtheory::smooth_set(self.n_max, tau, table)?);
            }
            None => set.extend(2..=self.n_max),
        }
        if set.is_empty() {
            return Err(Error::domain("effective index set is empty"));
        }
        Ok(set)
    }

    /// Torus dimension of the lift: the cap when present, else `pi(N)`.
    pub fn lift_tau(&self, table: &PrimeTable) -> Result<usize> {
        match self.smooth_cap {
            Some(tau) => Ok(tau),
            None => table.prime_pi(self.n_max),
        }
    }
}

/// A Rademacher draw: signs in `{-1, +1}^N`, optionally seed-backed.
///
/// Seeded generation consumes one 64-bit word per 64 signs (LSB first), so
/// regeneration from the same seed is bit-identical.
#[derive(Debug, Clone, PartialEq)]
pub struct SignAssignment {
    signs: Vec<i8>,
    seed: Option<u64>,
}

impl SignAssignment {
    pub fn from_seed(n: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut signs = Vec::with_capacity(n as usize);
        let mut word = 0u64;
        for i in 0..n {
            if i % 64 == 0 {
                word = rng.next_u64();
            }
            signs.push(if word >> (i % 64) & 1 == 1 { 1 } else { -1 });
        }
        SignAssignment { signs, seed: Some(seed) }
    }

    pub fn from_signs(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::domain("sign assignment entries must be +/-1"));
        }
        Ok(SignAssignment { signs, seed: None })
    }

    pub fn all_plus(n: u64) -> Self {
        SignAssignment { signs: vec![1; n as usize], seed: None }
    }

    pub fn n(&self) -> u64 {
        self.signs.len() as u64
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Sign of index n (1-based), as +/-1.0.
    pub fn sign(&self, n: u64) -> f64 {
        self.signs[n as usize - 1] as f64
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Copy with the sign of index n flipped.
    pub fn flipped(&self, n: u64) -> Self {
        let mut signs = self.signs.clone();
        signs[n as usize - 1] = -signs[n as usize - 1];
        SignAssignment { signs, seed: None }
    }

    /// Copy with every sign negated.
    pub fn negated(&self) -> Self {
        SignAssignment { signs: self.signs.iter().map(|&s| -s).collect(), seed: None }
    }
}

/// A point of the torus `[0,1)^tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

/// Wrap a real into `[0, 1)`.
pub fn wrap01(x: f64) -> f64 {
    let f = x.rem_euclid(1.0);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|&z| !(0.0..1.0).contains(&z)) {
            return Err(Error::domain("torus coordinates must lie in [0, 1)"));
        }
        Ok(TorusPoint { coords })
    }

    pub fn zero(tau: usize) -> Self {
        TorusPoint { coords: vec![0.0; tau] }
    }

    /// Image of the line point `t` under the lift:
    /// `z_j = frac(-t ln p_j / 2 pi)`.
    pub fn from_line(t: f64, tau: usize, table: &PrimeTable) -> Result<Self> {
        let mut coords = Vec::with_capacity(tau);
        for j in 1..=tau {
            let p = table.prime(j)? as f64;
            coords.push(wrap01(-t * p.ln() / TWO_PI));
        }
        Ok(TorusPoint { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// One term of the lifted polynomial.
#[derive(Debug, Clone)]
pub struct LiftTerm {
    /// Source index n (kept for witnesses and diagnostics).
    pub n: u64,
    /// Prime-exponent frequency vector, length tau.
    pub freq: Vec<u32>,
    /// Real coefficient `eps_n d(n) n^{-sigma}`.
    pub coeff: f64,
}

/// The trigonometric polynomial `Q(z) = sum coeff * e^{2 pi i <freq, z>}`
/// on the torus of dimension tau.
#[derive(Debug, Clone)]
pub struct LiftedPolynomial {
    tau: usize,
    terms: Vec<LiftTerm>,
}

impl LiftedPolynomial {
    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn terms(&self) -> &[LiftTerm] {
        &self.terms
    }

    /// Triangle bound `sum |coeff|`: no evaluation can exceed it.
    pub fn coeff_l1(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    fn check_dim(&self, z: &TorusPoint) -> Result<()> {
        if z.dim() != self.tau {
            return Err(Error::shape(format!(
                "torus point has dimension {}, lift has tau = {}",
                z.dim(),
                self.tau
            )));
        }
        Ok(())
    }

    pub fn eval(&self, z: &TorusPoint) -> Result<Complex64> {
        self.check_dim(z)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            let mut phase = 0.0;
            for (a, zj) in term.freq.iter().zip(z.coords()) {
                if *a != 0 {
                    phase += *a as f64 * zj;
                }
            }
            sum += term.coeff * Complex64::from_polar(1.0, TWO_PI * phase);
        }
        Ok(sum)
    }

    pub fn abs2(&self, z: &TorusPoint) -> Result<f64> {
        Ok(self.eval(z)?.norm_sqr())
    }

    /// Analytic gradient of `|Q(z)|^2`:
    /// `d_j |Q|^2 = 2 Re(conj(Q) d_j Q)` with
    /// `d_j Q = 2 pi i sum coeff freq_j e^{2 pi i <freq, z>}`.
    pub fn grad_abs2(&self, z: &TorusPoint) -> Result<Vec<f64>> {
        self.check_dim(z)?;
        let mut q = Complex64::new(0.0, 0.0);
        let mut partial = vec![Complex64::new(0.0, 0.0); self.tau];
        for term in &self.terms {
            let mut phase = 0.0;
            for (a, zj) in term.freq.iter().zip(z.coords()) {
                if *a != 0 {
                    phase += *a as f64 * zj;
                }
            }
            let w = term.coeff * Complex64::from_polar(1.0, TWO_PI * phase);
            q += w;
            for (j, &a) in term.freq.iter().enumerate() {
                if a != 0 {
                    partial[j] += w * a as f64;
                }
            }
        }
        let cq = q.conj();
        Ok(partial
            .iter()
            .map(|&pj| -2.0 * TWO_PI * (cq * pj).im)
            .collect())
    }
}

/// Lift the polynomial to the torus: one term per effective index, with the
/// exponent vector of n as frequency and coefficient `eps_n d(n) n^{-sigma}`.
/// The index n = 1 maps to the zero frequency.
pub fn bohr_lift(
    spec: &PolynomialSpec,
    signs: &SignAssignment,
    table: &PrimeTable,
) -> Result<LiftedPolynomial> {
    if signs.n() < spec.n_max {
        return Err(Error::shape(format!(
            "sign assignment covers {} indices, polynomial needs {}",
            signs.n(),
            spec.n_max
        )));
    }
    let tau = spec.lift_tau(table)?;
    if tau > table.len() {
        return Err(Error::range(format!(
            "lift dimension {tau} exceeds prime table of {}",
            table.len()
        )));
    }
    let index_set = spec.index_set(table)?;
    let weights = spec.weight.values(spec.n_max)?;
    let spf = smallest_prime_factor_table(spec.n_max);
    let mut terms = Vec::with_capacity(index_set.len());
    for &n in &index_set {
        let mut freq = vec![0u32; tau];
        let mut rem = n;
        while rem > 1 {
            let p = spf[rem as usize] as u64;
            let j = table
                .primes()
                .binary_search(&p)
                .map_err(|_| Error::range(format!("prime {p} missing from table")))?;
            if j >= tau {
                return Err(Error::Smoothness { n, factor: p });
            }
            while rem % p == 0 {
                freq[j] += 1;
                rem /= p;
            }
        }
        let coeff = signs.sign(n) * weights[n as usize] * (-spec.sigma * (n as f64).ln()).exp();
        terms.push(LiftTerm { n, freq, coeff });
    }
    Ok(LiftedPolynomial { tau, terms })
}

/// Precomputed coefficients and log-frequencies for fast line evaluation.
#[derive(Debug, Clone)]
pub struct LineEvaluator {
    coeffs: Vec<f64>,
    ln_n: Vec<f64>,
}

impl LineEvaluator {
    pub fn new(spec: &PolynomialSpec, signs: &SignAssignment, table: &PrimeTable) -> Result<Self> {
        if signs.n() < spec.n_max {
            return Err(Error::shape(format!(
                "sign assignment covers {} indices, polynomial needs {}",
                signs.n(),
                spec.n_max
            )));
        }
        let index_set = spec.index_set(table)?;
        let weights = spec.weight.values(spec.n_max)?;
        let mut coeffs = Vec::with_capacity(index_set.len());
        let mut ln_n = Vec::with_capacity(index_set.len());
        for &n in &index_set {
            let l = (n as f64).ln();
            coeffs.push(signs.sign(n) * weights[n as usize] * (-spec.sigma * l).exp());
            ln_n.push(l);
        }
        Ok(LineEvaluator { coeffs, ln_n })
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `P(sigma + it) = sum eps_n d(n) n^{-sigma} e^{-i t ln n}`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (c, l) in self.coeffs.iter().zip(&self.ln_n) {
            sum += c * Complex64::from_polar(1.0, -t * l);
        }
        sum
    }

    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Sweep `|P|^2` over the uniform grid `t_k = t0 + k dt`, streaming the
    /// values to `visit(k, abs2)`.
    ///
    /// Uses one rotor multiply per term and step, resynchronizing against a
    /// direct evaluation every 4096 steps to cap phase drift; callers that
    /// need certified values must re-evaluate at the reported t directly.
    pub fn sweep_abs2(&self, t0: f64, dt: f64, count: u64, mut visit: impl FnMut(u64, f64)) {
        const RESYNC: u64 = 4096;
        let rot: Vec<Complex64> = self
            .ln_n
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -dt * l))
            .collect();
        let mut cur: Vec<Complex64> = Vec::with_capacity(self.len());
        for k in 0..count {
            if k % RESYNC == 0 {
                let t = t0 + k as f64 * dt;
                cur.clear();
                cur.extend(
                    self.coeffs
                        .iter()
                        .zip(&self.ln_n)
                        .map(|(&c, &l)| c * Complex64::from_polar(1.0, -t * l)),
                );
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for w in &cur {
                sum += w;
            }
            visit(k, sum.norm_sqr());
            for (w, r) in cur.iter_mut().zip(&rot) {
                *w *= *r;
            }
        }
    }
}

/// One-shot line evaluation (see `LineEvaluator` for sweeps).
pub fn eval_line(
    spec: &PolynomialSpec,
    signs: &SignAssignment,
    t: f64,
    table: &PrimeTable,
) -> Result<Complex64> {
    Ok(LineEvaluator::new(spec, signs, table)?.eval(t))
}
