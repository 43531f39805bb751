//! Invariant-suite runner: every primary module checked at fixed small
//! scales, one pass/fail line per invariant, exit 1 on any failure.
//!
//! `--inject-fault khintchine-constant` replaces the sharp lower constant
//! with 0.9, which must trip the per-block sandwich check; it exists to
//! prove the suite can fail loudly.

use dirsup::bounds::{
    halasz_predictor, pj_asymptotic_ratio, queffelec_predictor, remark1_exponent,
    thm1_predictor,
};
use dirsup::cube::{
    cube_sup, expected_cube_sup, mean_abs_sign_sum, thm31b_value, CubeDecomposition, CubeMode,
    KHINTCHINE_LOWER,
};
use dirsup::dirichlet::{
    bohr_lift, eval_line, wrap01, LineEvaluator, PolynomialSpec, SignAssignment, TorusPoint,
};
use dirsup::numtheory::{
    e_partition, factor_exponents, largest_prime_factor, sieve_primes, smooth_set,
};
use dirsup::supremum::{sup_t_grid, sup_torus_dense, sup_torus_multistart, Witness};
use dirsup::weights::{b_star, cumulative_profile, growth_condition_scan, WeightSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::table;
use crate::CliError;

struct Fault {
    khintchine_lower: f64,
}

type CheckResult = Result<(), String>;

fn fail(msg: impl Into<String>) -> CheckResult {
    Err(msg.into())
}

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let fault = match cfg.inject_fault.as_deref() {
        None => Fault { khintchine_lower: KHINTCHINE_LOWER },
        Some("khintchine-constant") => Fault { khintchine_lower: 0.9 },
        Some(other) => {
            return Err(CliError::usage(format!(
                "unknown fault '{other}' (expected khintchine-constant)"
            )))
        }
    };

    let checks: Vec<(&str, Box<dyn Fn(&Fault) -> CheckResult>)> = vec![
        ("numtheory/sieve-matches-trial-division", Box::new(|_| sieve_oracle())),
        ("numtheory/prime-pi-counts", Box::new(|_| prime_pi_counts())),
        ("numtheory/factorization-reconstructs", Box::new(|_| factor_reconstruct())),
        ("numtheory/largest-prime-factor-convention", Box::new(|_| lpf_convention())),
        ("numtheory/e-partition-covers-range", Box::new(|_| e_partition_partition())),
        ("numtheory/smooth-set-full-and-monotone", Box::new(|_| smooth_monotone())),
        ("numtheory/l-blocks-inside-e-classes", Box::new(|_| l_subset_e())),
        ("weights/unit-profile-flat", Box::new(|_| unit_profile())),
        ("weights/divisor-frozen-values", Box::new(|_| divisor_frozen())),
        ("weights/mangoldt-frozen-values", Box::new(|_| mangoldt_frozen())),
        ("weights/d2-tilde-dominates-d1-tilde", Box::new(|_| tilde_ordering())),
        ("weights/divisor-multiplicative", Box::new(|_| divisor_multiplicative())),
        ("weights/growth-constants", Box::new(|_| growth_constants())),
        ("weights/profile-matches-resummation", Box::new(|_| profile_resummation())),
        ("dirichlet/line-embeds-in-torus", Box::new(|_| bohr_identity())),
        ("dirichlet/triangle-bound", Box::new(|_| triangle_bound())),
        ("dirichlet/mean-square-identity", Box::new(|_| mean_square())),
        ("dirichlet/gradient-matches-finite-differences", Box::new(|_| gradient_fd())),
        ("dirichlet/sign-flip-locality", Box::new(|_| sign_flip())),
        ("supremum/witness-reproduces-value", Box::new(|_| witness_reproducible())),
        ("supremum/line-below-torus", Box::new(|_| line_below_torus())),
        ("supremum/monotone-in-budget", Box::new(|_| budget_monotone())),
        ("cube/sup-identity-by-enumeration", Box::new(|_| cube_identity())),
        ("cube/khintchine-per-block-sandwich", Box::new(|f| khintchine_sandwich(f))),
        ("cube/band-brackets-expectation", Box::new(|f| band_brackets(f))),
        ("cube/thm31b-frozen-value", Box::new(|_| thm31b_frozen())),
        ("bounds/predictor-consistency", Box::new(|_| predictor_consistency())),
        ("bounds/remark1-exponent-identities", Box::new(|_| remark1_identities())),
        ("bounds/pj-asymptotic-band", Box::new(|_| pj_band())),
        ("cli/csv-schema-headers", Box::new(|_| schema_headers())),
    ];

    let mut failures = 0usize;
    for (name, check) in &checks {
        match check(&fault) {
            Ok(()) => println!("ok   {name}"),
            Err(msg) => {
                println!("FAIL {name}: {msg}");
                failures += 1;
            }
        }
    }
    println!(
        "verify: {} checks, {failures} failure(s)",
        checks.len()
    );
    if failures > 0 {
        Err(CliError::violation(format!("{failures} invariant(s) violated")))
    } else {
        Ok(())
    }
}

fn sieve_oracle() -> CheckResult {
    let table = sieve_primes(2_000);
    let mut oracle = Vec::new();
    for n in 2..=2_000u64 {
        let mut prime = true;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                prime = false;
                break;
            }
            d += 1;
        }
        if prime {
            oracle.push(n);
        }
    }
    if table.primes() != oracle.as_slice() {
        return fail("sieve disagrees with trial division below 2000");
    }
    Ok(())
}

fn prime_pi_counts() -> CheckResult {
    let table = sieve_primes(20_000);
    for (n, expect) in [(10u64, 4usize), (100, 25), (1_000, 168), (20_000, 2_262)] {
        let got = table.prime_pi(n).map_err(|e| e.to_string())?;
        if got != expect {
            return fail(format!("pi({n}) = {got}, expected {expect}"));
        }
    }
    if table.prime_pi(30_000).is_ok() {
        return fail("pi beyond the sieve limit must be a range error");
    }
    Ok(())
}

fn factor_reconstruct() -> CheckResult {
    let table = sieve_primes(20_000);
    let tau = table.len();
    for n in 1..=20_000u64 {
        let v = factor_exponents(n, tau, &table).map_err(|e| e.to_string())?;
        if v.reconstruct(&table).map_err(|e| e.to_string())? != n {
            return fail(format!("reconstruction failed at n = {n}"));
        }
    }
    Ok(())
}

fn lpf_convention() -> CheckResult {
    let cases = [(1u64, 1u64), (12, 3), (97, 97), (1024, 2)];
    for (n, expect) in cases {
        let got = largest_prime_factor(n).map_err(|e| e.to_string())?;
        if got != expect {
            return fail(format!("P+({n}) = {got}, expected {expect}"));
        }
    }
    if largest_prime_factor(0).is_ok() {
        return fail("P+(0) must be a domain error");
    }
    Ok(())
}

fn e_partition_partition() -> CheckResult {
    let table = sieve_primes(2_000);
    let part = e_partition(2_000, &table).map_err(|e| e.to_string())?;
    let mut seen = vec![false; 2_001];
    for (&j, members) in part.sets() {
        let p = table.prime(j).map_err(|e| e.to_string())?;
        for &m in members {
            if seen[m as usize] {
                return fail(format!("{m} appears in two classes"));
            }
            seen[m as usize] = true;
            if largest_prime_factor(m).unwrap() != p {
                return fail(format!("{m} in class of p_{j} = {p}"));
            }
        }
    }
    if !seen[2..].iter().all(|&s| s) {
        return fail("classes do not cover 2..=N");
    }
    Ok(())
}

fn smooth_monotone() -> CheckResult {
    let table = sieve_primes(500);
    let pi = table.prime_pi(500).unwrap();
    let full = smooth_set(500, pi, &table).map_err(|e| e.to_string())?;
    if full != (2..=500).collect::<Vec<_>>() {
        return fail("smooth set at tau = pi(N) is not the whole range");
    }
    let mut prev_len = 0usize;
    for tau in 1..=pi {
        let s = smooth_set(500, tau, &table).map_err(|e| e.to_string())?;
        if s.len() < prev_len {
            return fail(format!("smooth set shrank at tau = {tau}"));
        }
        prev_len = s.len();
    }
    Ok(())
}

fn l_subset_e() -> CheckResult {
    let table = sieve_primes(600);
    for (n, tau) in [(600u64, 9usize), (600, 4), (100, 5)] {
        let ls = dirsup::numtheory::l_sets(n, tau, &table).map_err(|e| e.to_string())?;
        let es = e_partition(n, &table).map_err(|e| e.to_string())?;
        for (&j, members) in ls.sets() {
            let ej = es.set(j).unwrap_or(&[]);
            for &m in members {
                if !ej.contains(&m) {
                    return fail(format!("L_{j} member {m} outside E_{j} (N={n}, tau={tau})"));
                }
            }
        }
    }
    Ok(())
}

fn unit_profile() -> CheckResult {
    let p = cumulative_profile(&WeightSpec::Unit, 5_000).map_err(|e| e.to_string())?;
    for m in [1u64, 7, 5_000] {
        if p.d1_tilde(m) != 1.0 || p.d2_tilde(m) != 1.0 {
            return fail(format!("unit tilde characteristics not 1 at m = {m}"));
        }
    }
    Ok(())
}

fn divisor_frozen() -> CheckResult {
    if WeightSpec::Divisor.value(12).unwrap() != 6.0 {
        return fail("d(12) != 6");
    }
    let p = cumulative_profile(&WeightSpec::Divisor, 4).map_err(|e| e.to_string())?;
    if p.d2(4) != 18.0 {
        return fail(format!("divisor D2(4) = {}, expected 18", p.d2(4)));
    }
    if (p.d2_tilde(4) - 4.5f64.sqrt()).abs() > 1e-15 {
        return fail("divisor D2~(4) != sqrt(4.5)");
    }
    Ok(())
}

fn mangoldt_frozen() -> CheckResult {
    let l9 = WeightSpec::Mangoldt.value(9).unwrap();
    if (l9 - 3.0f64.ln()).abs() > 1e-15 {
        return fail("mangoldt(9) != ln 3");
    }
    if WeightSpec::Mangoldt.value(10).unwrap() != 0.0 {
        return fail("mangoldt(10) != 0");
    }
    let p = cumulative_profile(&WeightSpec::Mangoldt, 10).map_err(|e| e.to_string())?;
    let expect = 3.0 * 2.0f64.ln() + 2.0 * 3.0f64.ln() + 5.0f64.ln() + 7.0f64.ln();
    if (p.d1(10) - expect).abs() > 1e-12 {
        return fail(format!("mangoldt D1(10) = {}, expected {expect}", p.d1(10)));
    }
    Ok(())
}

fn tilde_ordering() -> CheckResult {
    for spec in [WeightSpec::Unit, WeightSpec::Divisor, WeightSpec::Mangoldt] {
        let p = cumulative_profile(&spec, 20_000).map_err(|e| e.to_string())?;
        for m in 1..=20_000u64 {
            if p.d2_tilde(m) < p.d1_tilde(m) - 1e-12 {
                return fail(format!("{}: D2~({m}) < D1~({m})", spec.id()));
            }
        }
    }
    Ok(())
}

fn divisor_multiplicative() -> CheckResult {
    let d = WeightSpec::Divisor.values(40_000).map_err(|e| e.to_string())?;
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    for m in 1..=200u64 {
        for n in 1..=200u64 {
            if gcd(m, n) == 1 && d[(m * n) as usize] != d[m as usize] * d[n as usize] {
                return fail(format!("d({m}*{n}) != d({m})d({n})"));
            }
        }
    }
    Ok(())
}

fn growth_constants() -> CheckResult {
    let table = sieve_primes(1_000);
    let c = growth_condition_scan(&WeightSpec::Divisor, 1.0, 2_000, &table)
        .map_err(|e| e.to_string())?;
    if (c - 2.0).abs() > 1e-12 {
        return fail(format!("divisor growth constant {c}, expected 2"));
    }
    let c = growth_condition_scan(&WeightSpec::Mangoldt, 0.0, 2_000, &table)
        .map_err(|e| e.to_string())?;
    if (c - 1.0).abs() > 1e-12 {
        return fail(format!("mangoldt growth constant {c}, expected 1"));
    }
    Ok(())
}

fn profile_resummation() -> CheckResult {
    let m_max = 5_000u64;
    for spec in [WeightSpec::Divisor, WeightSpec::Mangoldt] {
        let p = cumulative_profile(&spec, m_max).map_err(|e| e.to_string())?;
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for k in 1..=m_max {
            let d = spec.value(k).unwrap();
            s1 += d;
            s2 += d * d;
            if k % 251 == 0 {
                if (p.d1(k) - s1).abs() > 1e-9 * s1.abs().max(1.0) {
                    return fail(format!("{}: D1({k}) drifted", spec.id()));
                }
                if (p.d2(k) - s2).abs() > 1e-9 * s2.abs().max(1.0) {
                    return fail(format!("{}: D2({k}) drifted", spec.id()));
                }
            }
        }
    }
    Ok(())
}

fn bohr_identity() -> CheckResult {
    let table = sieve_primes(50);
    let spec = PolynomialSpec::new(12, 0.25, WeightSpec::Divisor).unwrap();
    let signs = SignAssignment::from_seed(12, 321);
    let lift = bohr_lift(&spec, &signs, &table).map_err(|e| e.to_string())?;
    let mut t = 0.11f64;
    for _ in 0..100 {
        let z = TorusPoint::from_line(t, lift.tau(), &table).unwrap();
        let qt = lift.eval(&z).unwrap();
        let pt = eval_line(&spec, &signs, t, &table).unwrap();
        if (qt - pt).norm() > 1e-12 {
            return fail(format!("identity off by {} at t = {t}", (qt - pt).norm()));
        }
        t = (t * 1.7 + 0.93) % 200.0;
    }
    Ok(())
}

fn triangle_bound() -> CheckResult {
    let table = sieve_primes(50);
    let spec = PolynomialSpec::new(20, 0.1, WeightSpec::Divisor).unwrap();
    let signs = SignAssignment::from_seed(20, 5);
    let ev = LineEvaluator::new(&spec, &signs, &table).unwrap();
    let bound = ev.coeff_l1() + 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let t = (rng.random::<f64>() - 0.5) * 1_000.0;
        if ev.eval(t).norm() > bound {
            return fail(format!("|P({t})| above the coefficient l1 norm"));
        }
    }
    Ok(())
}

fn mean_square() -> CheckResult {
    let table = sieve_primes(10);
    let spec = PolynomialSpec::new(4, 0.3, WeightSpec::Divisor).unwrap();
    let signs = SignAssignment::from_seed(4, 17);
    let lift = bohr_lift(&spec, &signs, &table).unwrap();
    let energy: f64 = lift.terms().iter().map(|t| t.coeff * t.coeff).sum();
    let p = 128u64;
    let mut acc = 0.0;
    for k1 in 0..p {
        for k2 in 0..p {
            let z = TorusPoint::new(vec![k1 as f64 / p as f64, k2 as f64 / p as f64]).unwrap();
            acc += lift.abs2(&z).unwrap();
        }
    }
    let mean = acc / (p * p) as f64;
    if (mean - energy).abs() > 1e-3 * energy {
        return fail(format!("grid mean {mean} vs coefficient energy {energy}"));
    }
    Ok(())
}

fn gradient_fd() -> CheckResult {
    let table = sieve_primes(50);
    let spec = PolynomialSpec::new(10, 0.2, WeightSpec::Divisor).unwrap();
    let signs = SignAssignment::from_seed(10, 23);
    let lift = bohr_lift(&spec, &signs, &table).unwrap();
    let tau = lift.tau();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let coords: Vec<f64> = (0..tau).map(|_| rng.random::<f64>()).collect();
        let grad = lift.grad_abs2(&TorusPoint::new(coords.clone()).unwrap()).unwrap();
        let h = 1e-6;
        for j in 0..tau {
            let mut up = coords.clone();
            let mut dn = coords.clone();
            up[j] = wrap01(up[j] + h);
            dn[j] = wrap01(dn[j] - h);
            let fd = (lift.abs2(&TorusPoint::new(up).unwrap()).unwrap()
                - lift.abs2(&TorusPoint::new(dn).unwrap()).unwrap())
                / (2.0 * h);
            if (grad[j] - fd).abs() / grad[j].abs().max(1.0) > 1e-5 {
                return fail(format!("gradient coord {j}: {} vs fd {fd}", grad[j]));
            }
        }
    }
    Ok(())
}

fn sign_flip() -> CheckResult {
    let table = sieve_primes(50);
    let spec = PolynomialSpec::new(9, 0.15, WeightSpec::Unit).unwrap();
    let signs = SignAssignment::from_seed(9, 2);
    let ev = LineEvaluator::new(&spec, &signs, &table).unwrap();
    let ev2 = LineEvaluator::new(&spec, &signs.flipped(6), &table).unwrap();
    for &t in &[0.0, 2.2, 51.7] {
        let diff = ev2.eval(t) - ev.eval(t);
        let c = signs.sign(6) * 6.0f64.powf(-0.15);
        let theta = t * 6.0f64.ln();
        // -2 c e^{-i theta}
        let expect_re = -2.0 * c * theta.cos();
        let expect_im = 2.0 * c * theta.sin();
        if (diff.re - expect_re).abs() > 1e-12 || (diff.im - expect_im).abs() > 1e-12 {
            return fail(format!("sign flip delta wrong at t = {t}"));
        }
    }
    Ok(())
}

fn witness_reproducible() -> CheckResult {
    let table = sieve_primes(20);
    let spec = PolynomialSpec::new(8, 0.1, WeightSpec::Unit).unwrap();
    let signs = SignAssignment::from_seed(8, 42);
    let est = sup_t_grid(&spec, &signs, &table, 100.0, 10_000, 25).map_err(|e| e.to_string())?;
    let Witness::Line(t) = est.witness else {
        return fail("line estimator returned a torus witness");
    };
    let v = eval_line(&spec, &signs, t, &table).unwrap().norm();
    if (v - est.value).abs() > 1e-12 {
        return fail(format!("witness re-evaluation {v} vs stored {}", est.value));
    }
    let lift = bohr_lift(&spec, &signs, &table).unwrap();
    let est = sup_torus_multistart(&lift, 8, 100, 3).map_err(|e| e.to_string())?;
    let Witness::Torus(z) = &est.witness else {
        return fail("torus estimator returned a line witness");
    };
    let v = lift.eval(&TorusPoint::new(z.clone()).unwrap()).unwrap().norm();
    if (v - est.value).abs() > 1e-12 {
        return fail("torus witness does not reproduce the value");
    }
    Ok(())
}

fn line_below_torus() -> CheckResult {
    let table = sieve_primes(10);
    for seed in 0..5u64 {
        let spec = PolynomialSpec::new(6, 0.2, WeightSpec::Unit).unwrap();
        let signs = SignAssignment::from_seed(6, seed);
        let line = sup_t_grid(&spec, &signs, &table, 500.0, 50_000, 20).unwrap();
        let lift = bohr_lift(&spec, &signs, &table).unwrap();
        let dense = sup_torus_dense(&lift, 96).unwrap();
        let multi = sup_torus_multistart(&lift, 16, 150, seed).unwrap();
        let torus = dense.value.max(multi.value);
        if line.value > torus + 1e-9 {
            return fail(format!("seed {seed}: line {} above torus {torus}", line.value));
        }
    }
    Ok(())
}

fn budget_monotone() -> CheckResult {
    let table = sieve_primes(20);
    for seed in 0..5u64 {
        let spec = PolynomialSpec::new(7, 0.3, WeightSpec::Unit).unwrap();
        let signs = SignAssignment::from_seed(7, seed);
        let mut prev = f64::NEG_INFINITY;
        for count in [1_001u64, 2_001, 4_001] {
            let est = sup_t_grid(&spec, &signs, &table, 80.0, count, 0).unwrap();
            if est.value < prev {
                return fail(format!("seed {seed}: value dropped at grid count {count}"));
            }
            prev = est.value;
        }
        let lift = bohr_lift(&spec, &signs, &table).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for starts in [2u32, 4, 8] {
            let est = sup_torus_multistart(&lift, starts, 60, seed).unwrap();
            if est.value < prev {
                return fail(format!("seed {seed}: value dropped at starts {starts}"));
            }
            prev = est.value;
        }
    }
    Ok(())
}

fn cube_identity() -> CheckResult {
    let table = sieve_primes(2_000);
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for _ in 0..10 {
        let tau = 2 + (rng.random::<u64>() % 7) as usize;
        let p_tau = table.prime(tau).unwrap();
        let n = p_tau + rng.random::<u64>() % 1_500;
        let sigma = rng.random::<f64>() * 0.5;
        let decomp = CubeDecomposition::new(n, tau, sigma, &WeightSpec::Unit, &table)
            .map_err(|e| e.to_string())?;
        let signs = SignAssignment::from_seed(n, rng.random::<u64>());
        let fast = cube_sup(&decomp, &signs).unwrap();
        // exhaustive over the cube, signs recomputed from exponent parity
        let half = tau / 2;
        let free = tau - half;
        let mut best: f64 = 0.0;
        for mask in 0..(1u64 << free) {
            let mut total = 0.0;
            for block in decomp.blocks() {
                for (&m, &coeff) in block.members.iter().zip(&block.coeffs) {
                    let exps = factor_exponents(m, tau, &table).unwrap();
                    let mut parity = 0u32;
                    for k in half + 1..=tau {
                        if mask >> (k - half - 1) & 1 == 1 {
                            parity += exps.exponent(k);
                        }
                    }
                    total += signs.sign(m) * coeff * if parity % 2 == 1 { -1.0 } else { 1.0 };
                }
            }
            best = best.max(total.abs());
        }
        if (fast - best).abs() > 1e-12 * fast.max(1.0) {
            return fail(format!("N={n} tau={tau}: identity {fast} vs enumeration {best}"));
        }
    }
    Ok(())
}

fn khintchine_sandwich(fault: &Fault) -> CheckResult {
    let table = sieve_primes(1_000);
    for (n, tau, sigma) in [(20u64, 4usize, 0.0), (60, 6, 0.25), (200, 4, 0.5), (100, 8, 0.0)] {
        let decomp = CubeDecomposition::new(n, tau, sigma, &WeightSpec::Unit, &table)
            .map_err(|e| e.to_string())?;
        for block in decomp.blocks() {
            if block.members.is_empty() || block.members.len() > 16 {
                continue;
            }
            let e_abs = mean_abs_sign_sum(&block.coeffs).unwrap();
            let upper = block.mass.sqrt();
            let lower = fault.khintchine_lower * upper;
            let slack = 1e-12 * upper.max(1.0);
            if e_abs < lower - slack || e_abs > upper + slack {
                return fail(format!(
                    "N={n} tau={tau} j={}: E|S| = {e_abs:.6} outside [{lower:.6}, {upper:.6}]",
                    block.j
                ));
            }
        }
    }
    Ok(())
}

fn band_brackets(fault: &Fault) -> CheckResult {
    let table = sieve_primes(1_000);
    for (n, tau, sigma) in [(20u64, 4usize, 0.0), (60, 17, 0.0), (150, 10, 0.5)] {
        let decomp = CubeDecomposition::new(n, tau, sigma, &WeightSpec::Unit, &table)
            .map_err(|e| e.to_string())?;
        if decomp.blocks().iter().any(|b| b.members.len() > 20) {
            continue;
        }
        let e = expected_cube_sup(&decomp, CubeMode::Exact).unwrap();
        let hi = decomp.sum_sqrt_masses();
        let lo = fault.khintchine_lower * hi;
        let slack = 1e-12 * hi.max(1.0);
        if e.mean < lo - slack || e.mean > hi + slack {
            return fail(format!(
                "N={n} tau={tau}: E = {:.6} outside band [{lo:.6}, {hi:.6}]",
                e.mean
            ));
        }
    }
    Ok(())
}

fn thm31b_frozen() -> CheckResult {
    let table = sieve_primes(2_000);
    let v = thm31b_value(1_000, 10, &table).unwrap();
    let expect = (10.0 / 10.0f64.ln() * (1000.0 / 29.0f64).ln().min(11.0f64.ln())).sqrt();
    if (v - expect).abs() > 1e-12 {
        return fail(format!("thm31b(1000, 10) = {v}, expected {expect}"));
    }
    Ok(())
}

fn predictor_consistency() -> CheckResult {
    for n in [16u64, 100, 2_000] {
        let h = halasz_predictor(n).unwrap();
        let q = queffelec_predictor(n, 0.0).unwrap();
        if (h - q).abs() > 1e-12 * h {
            return fail(format!("queffelec(sigma=0) != halasz at N = {n}"));
        }
        for sigma in [0.0, 0.5] {
            let t = thm1_predictor(n, sigma, &WeightSpec::Unit).unwrap();
            let q = queffelec_predictor(n, sigma).unwrap();
            if (t - q).abs() > 1e-12 * q {
                return fail(format!("thm1(unit) != queffelec at N = {n}, sigma = {sigma}"));
            }
        }
    }
    Ok(())
}

fn remark1_identities() -> CheckResult {
    let r = remark1_exponent(b_star()).unwrap();
    if (r - 1.0).abs() > 1e-14 {
        return fail(format!("r(b_*) = {r}, expected 1"));
    }
    let mut b = b_star();
    while b < 0.5 {
        let r = remark1_exponent(b).unwrap();
        if r >= 1.0 + b {
            return fail(format!("r({b}) = {r} not below 1 + b"));
        }
        b += 0.005;
    }
    Ok(())
}

fn pj_band() -> CheckResult {
    let table = sieve_primes(300_000);
    let r2 = pj_asymptotic_ratio(2, &table).unwrap();
    if (r2 - 3.0 / (2.0 * 2.0f64.ln())).abs() > 1e-12 {
        return fail(format!("ratio at j = 2 is {r2}"));
    }
    for j in 3..=20_000usize {
        let r = pj_asymptotic_ratio(j, &table).unwrap();
        if !(0.8..=1.6).contains(&r) {
            return fail(format!("ratio {r} at j = {j} outside [0.8, 1.6]"));
        }
    }
    Ok(())
}

fn schema_headers() -> CheckResult {
    let expected = [
        ("simulate", table::SIMULATE_HEADER, "N,sigma,weight,n_draws,mean,stderr,predictor,ratio"),
        ("cube", table::CUBE_HEADER, "N,tau,sigma,weight,e_sup,band_lo,band_hi,thm31b,ratio"),
        (
            "cube_blocks",
            table::CUBE_BLOCKS_HEADER,
            "N,tau,j,L_size,m_j,sqrt_m_j,E_abs_S_j,band_lower,band_upper",
        ),
        ("profile", table::PROFILE_HEADER, "M,D1,D2,D1_tilde,D2_tilde"),
        ("bounds", table::BOUNDS_HEADER, "name,N,sigma,tau,b,value"),
    ];
    for (name, actual, documented) in expected {
        if actual != documented {
            return fail(format!("{name} header drifted from the documented schema"));
        }
    }
    Ok(())
}
