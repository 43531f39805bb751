//! Cross-module invariant checks backed by independent oracles: trial
//! division, exhaustive or Gray-code sign enumeration, dense torus grids,
//! and one-pass re-summation.

use std::collections::BTreeMap;

use dirsup::bounds::{abel_ratio, thm31a_upper, Thm31aRegime};
use dirsup::cube::{cube_sup, CubeDecomposition};
use dirsup::dirichlet::{
    bohr_lift, eval_line, LineEvaluator, PolynomialSpec, SignAssignment, TorusPoint,
};
use dirsup::numtheory::{
    e_partition, factor_exponents, largest_prime_factor, sieve_primes, smooth_set, PrimeTable,
};
use dirsup::supremum::{sup_t_grid, sup_torus_dense};
use dirsup::weights::{
    cumulative_profile, growth_condition_scan, MultiplicativeWeight, WeightSpec,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn prime_pi_agrees_with_trial_division_to_1e5() {
    let table = sieve_primes(100_000);
    let mut count = 0usize;
    for n in 2..=100_000u64 {
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
            count += 1;
        }
        if n % 37 == 0 || prime {
            assert_eq!(table.prime_pi(n).unwrap(), count, "pi({n})");
        }
    }
    assert_eq!(table.prime_pi(100_000).unwrap(), 9_592);
}

#[test]
fn factorization_reconstructs_to_1e6() {
    // exhaustive through the public operation at moderate scale
    let table = sieve_primes(20_000);
    let tau = table.len();
    for n in 1..=20_000u64 {
        let v = factor_exponents(n, tau, &table).unwrap();
        assert_eq!(v.reconstruct(&table).unwrap(), n);
    }
    // full range through a smallest-prime-factor product oracle
    let big = sieve_primes(1_000_000);
    let part = e_partition(1_000_000, &big).unwrap();
    assert_eq!(part.total_len(), 999_999);
    // random spot checks through the operation at full tau
    let tau = big.len();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..500 {
        let n = 1 + rng.random::<u64>() % 1_000_000;
        let v = factor_exponents(n, tau, &big).unwrap();
        assert_eq!(v.reconstruct(&big).unwrap(), n);
    }
}

#[test]
fn e_partition_sizes_sum_to_n_minus_one() {
    let table = sieve_primes(5_000);
    for n in [2u64, 10, 999, 5_000] {
        let part = e_partition(n, &table).unwrap();
        let total: usize = part.sets().values().map(|v| v.len()).sum();
        assert_eq!(total as u64, n - 1);
    }
}

#[test]
fn smooth_set_full_tau_is_whole_range() {
    let table = sieve_primes(2_000);
    for n in [2u64, 100, 1_999] {
        let tau = table.prime_pi(n).unwrap();
        let s = smooth_set(n, tau, &table).unwrap();
        assert_eq!(s, (2..=n).collect::<Vec<_>>());
    }
}

#[test]
fn d2_tilde_dominates_d1_tilde_to_1e6() {
    for spec in [WeightSpec::Unit, WeightSpec::Divisor, WeightSpec::Mangoldt] {
        let p = cumulative_profile(&spec, 1_000_000).unwrap();
        let mut m = 1u64;
        while m <= 1_000_000 {
            assert!(
                p.d2_tilde(m) >= p.d1_tilde(m) - 1e-12,
                "{} at m = {m}: D2~ {} < D1~ {}",
                spec.id(),
                p.d2_tilde(m),
                p.d1_tilde(m)
            );
            m = (m * 10).max(m + 1);
        }
        // dense check on a prefix
        for m in 1..=10_000u64 {
            assert!(p.d2_tilde(m) >= p.d1_tilde(m) - 1e-12);
        }
    }
}

#[test]
fn divisor_weight_multiplicative_on_coprime_pairs() {
    let d = WeightSpec::Divisor.values(1_000_000).unwrap();
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    for m in 1..=1_000u64 {
        for n in 1..=1_000u64 {
            if gcd(m, n) == 1 {
                assert_eq!(
                    d[(m * n) as usize],
                    d[m as usize] * d[n as usize],
                    "d({m}*{n})"
                );
            }
        }
    }
}

#[test]
fn profile_matches_one_pass_resummation_at_100_checkpoints() {
    let m_max = 100_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut checkpoints: Vec<u64> = (0..100).map(|_| 1 + rng.random::<u64>() % m_max).collect();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    for spec in [WeightSpec::Divisor, WeightSpec::Mangoldt] {
        let p = cumulative_profile(&spec, m_max).unwrap();
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        let mut t1 = f64::NEG_INFINITY;
        let mut t2 = f64::NEG_INFINITY;
        let mut next = 0usize;
        for k in 1..=m_max {
            let dv = spec.value(k).unwrap();
            s1 += dv;
            s2 += dv * dv;
            t1 = t1.max(s1 / k as f64);
            t2 = t2.max(s2 / k as f64);
            if next < checkpoints.len() && checkpoints[next] == k {
                assert!((p.d1(k) - s1).abs() <= 1e-9 * s1.abs().max(1.0));
                assert!((p.d2(k) - s2).abs() <= 1e-9 * s2.abs().max(1.0));
                assert!((p.d1_tilde(k) - t1).abs() <= 1e-9 * t1.abs().max(1.0));
                assert!((p.d2_tilde(k) - t2.sqrt()).abs() <= 1e-9);
                next += 1;
            }
        }
        assert_eq!(next, checkpoints.len());
    }
}

/// Multiplicative weights with bounded prime values and tame prime-power
/// growth keep the growth-condition constant finite.
#[test]
fn generated_multiplicative_weights_have_finite_growth_constant() {
    let table = sieve_primes(1_500);
    let h = 1.5;
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for trial in 0..20 {
        let mut rules = BTreeMap::new();
        for &p in table.primes().iter().take_while(|&&p| p <= 100) {
            let mut chain = Vec::new();
            let mut cur = 0.5 + 1.5 * rng.random::<f64>(); // d(p) bounded
            chain.push(cur);
            for k in 1..12u32 {
                // ratio d(p^{k+1})/d(p^k) <= (1 + 1/k)^H
                let cap = (1.0 + 1.0 / k as f64).powf(h);
                cur *= cap * (0.3 + 0.7 * rng.random::<f64>());
                chain.push(cur);
            }
            rules.insert(p, chain);
        }
        let spec = WeightSpec::Multiplicative(MultiplicativeWeight::new(rules));
        let c = growth_condition_scan(&spec, h, 3_000, &table).unwrap();
        assert!(c.is_finite(), "trial {trial}: C = {c}");
        assert!(c > 0.0);
    }
}

#[test]
fn triangle_bound_on_line_and_torus() {
    let table = sieve_primes(100);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let n_max = 2 + rng.random::<u64>() % 30;
        let sigma = rng.random::<f64>() * 0.5;
        let weight = if rng.random::<bool>() { WeightSpec::Divisor } else { WeightSpec::Mangoldt };
        let spec = PolynomialSpec::new(n_max, sigma, weight).unwrap();
        let signs = SignAssignment::from_seed(n_max, rng.random::<u64>());
        let ev = LineEvaluator::new(&spec, &signs, &table).unwrap();
        let bound = ev.coeff_l1() + 1e-12;
        for _ in 0..20 {
            let t = (rng.random::<f64>() - 0.5) * 2_000.0;
            assert!(ev.eval(t).norm() <= bound);
        }
        let lift = bohr_lift(&spec, &signs, &table).unwrap();
        assert!((lift.coeff_l1() - ev.coeff_l1()).abs() < 1e-12);
        for _ in 0..20 {
            let z: Vec<f64> = (0..lift.tau()).map(|_| rng.random::<f64>()).collect();
            let v = lift.eval(&TorusPoint::new(z).unwrap()).unwrap();
            assert!(v.norm() <= bound);
        }
    }
}

/// Distinct frequencies are orthogonal: the mean of |Q|^2 over a full
/// uniform grid equals the coefficient energy.
#[test]
fn mean_square_identity_on_dense_grids() {
    let table = sieve_primes(10);
    for (n_max, per_axis) in [(4u64, 128u32), (6, 64)] {
        let sigma = 0.3;
        let spec = PolynomialSpec::new(n_max, sigma, WeightSpec::Divisor).unwrap();
        let signs = SignAssignment::from_seed(n_max, 17);
        let lift = bohr_lift(&spec, &signs, &table).unwrap();
        let tau = lift.tau();
        let energy: f64 = lift.terms().iter().map(|t| t.coeff * t.coeff).sum();

        let p = per_axis as u64;
        let mut idx = vec![0u64; tau];
        let mut acc = 0.0;
        let mut count = 0u64;
        'outer: loop {
            let z: Vec<f64> = idx.iter().map(|&k| k as f64 / p as f64).collect();
            acc += lift.abs2(&TorusPoint::new(z).unwrap()).unwrap();
            count += 1;
            let mut j = 0;
            loop {
                if j == tau {
                    break 'outer;
                }
                idx[j] += 1;
                if idx[j] < p {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
        let mean = acc / count as f64;
        assert!(
            (mean - energy).abs() <= 1e-3 * energy,
            "N={n_max}: grid mean {mean} vs energy {energy}"
        );
    }
}

#[test]
fn line_grid_below_dense_torus_for_small_tau() {
    let table = sieve_primes(10);
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..8 {
        let n_max = 4 + rng.random::<u64>() % 3; // tau in {2, 3}
        let sigma = rng.random::<f64>() * 0.5;
        let spec = PolynomialSpec::new(n_max, sigma, WeightSpec::Unit).unwrap();
        let signs = SignAssignment::from_seed(n_max, rng.random::<u64>());
        let line = sup_t_grid(&spec, &signs, &table, 2_000.0, 200_000, 30).unwrap();
        let lift = bohr_lift(&spec, &signs, &table).unwrap();
        let dense = sup_torus_dense(&lift, 160).unwrap();
        assert!(
            line.value <= dense.value + 1e-9 || line.value <= dense.value * (1.0 + 2e-4),
            "line {} above dense torus {}",
            line.value,
            dense.value
        );
    }
}

/// Adjacent-regime values of the three-regime functional stay within a
/// bounded jump at both boundary crossings.
#[test]
fn thm31a_boundary_jumps_bounded() {
    let table = sieve_primes(1_000_000);
    let n = 1_000_000u64;
    let mut prev = thm31a_upper(n, 1, &table).unwrap();
    let mut crossings = 0;
    for tau in 2..=3_000usize {
        let cur = thm31a_upper(n, tau, &table).unwrap();
        if cur.regime != prev.regime {
            let ratio = cur.value / prev.value;
            assert!(
                (0.25..=4.0).contains(&ratio),
                "jump {ratio} at tau = {tau} ({:?} -> {:?})",
                prev.regime,
                cur.regime
            );
            crossings += 1;
        }
        prev = cur;
    }
    assert_eq!(crossings, 2, "expected two regime crossings");
    assert_eq!(prev.regime, Thm31aRegime::LargeTau);
}

#[test]
fn abel_ratio_pilot_bands() {
    // unit sigma = 0 is exactly 1 (unit-test covered); record the pilot
    // bands for the weighted cases at M = 1e5
    let r = abel_ratio(&WeightSpec::Divisor, 0.25, 100_000).unwrap();
    assert!(r > 0.25 && r <= 4.0, "divisor sigma=1/4: {r}");
    let r = abel_ratio(&WeightSpec::Mangoldt, 0.5, 100_000).unwrap();
    assert!(r.is_finite() && r > 0.0, "mangoldt sigma=1/2: {r}");
    let r = abel_ratio(&WeightSpec::Divisor, 0.5, 100_000).unwrap();
    assert!(r.is_finite() && r > 0.0, "divisor sigma=1/2: {r}");
}

/// Gray-code enumeration of every sign pattern on the index set, tracking
/// the cube maxima of the full process and of its block restriction.
/// Returns (E max |Q|, E max |Q'|).
fn exact_cube_expectations(
    n_max: u64,
    tau: usize,
    sigma: f64,
    weight: &WeightSpec,
    table: &PrimeTable,
) -> (f64, f64) {
    let half = tau / 2;
    let free = tau - half;
    let z_count = 1usize << free;
    let indices = smooth_set(n_max, tau, table).unwrap();
    let k = indices.len();
    assert!(k <= 22, "exact enumeration capped; got {k} indices");
    let weights = weight.values(n_max).unwrap();
    let decomp = CubeDecomposition::new(n_max, tau, sigma, weight, table).unwrap();
    let mut member = vec![false; k];
    for (i, &n) in indices.iter().enumerate() {
        member[i] = decomp
            .blocks()
            .iter()
            .any(|b| b.members.binary_search(&n).is_ok());
    }

    // w[i][zmask] = d(n) n^{-sigma} * (-1)^{sum of free-covector parities}
    let mut w = vec![vec![0.0; z_count]; k];
    for (i, &n) in indices.iter().enumerate() {
        let exps = factor_exponents(n, tau, table).unwrap();
        let coeff = weights[n as usize] * (-sigma * (n as f64).ln()).exp();
        for zmask in 0..z_count {
            let mut parity = 0u32;
            for kk in half + 1..=tau {
                if zmask >> (kk - half - 1) & 1 == 1 {
                    parity += exps.exponent(kk);
                }
            }
            w[i][zmask] = if parity % 2 == 1 { -coeff } else { coeff };
        }
    }

    let mut q_sums = vec![0.0; z_count];
    let mut qp_sums = vec![0.0; z_count];
    for i in 0..k {
        for z in 0..z_count {
            q_sums[z] += w[i][z];
            if member[i] {
                qp_sums[z] += w[i][z];
            }
        }
    }
    let mut signs = vec![1.0f64; k];
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let mut total_q = max_abs(&q_sums);
    let mut total_qp = max_abs(&qp_sums);
    let patterns = 1u64 << k;
    for g in 1..patterns {
        let bit = g.trailing_zeros() as usize;
        let delta = -2.0 * signs[bit];
        signs[bit] = -signs[bit];
        for z in 0..z_count {
            q_sums[z] += delta * w[bit][z];
            if member[bit] {
                qp_sums[z] += delta * w[bit][z];
            }
        }
        total_q += max_abs(&q_sums);
        total_qp += max_abs(&qp_sums);
    }
    (total_q / patterns as f64, total_qp / patterns as f64)
}

/// Adding the independent centered remainder can only raise the expected
/// cube maximum: exact enumeration on small instances.
#[test]
fn cube_max_dominates_block_restriction_exactly() {
    let table = sieve_primes(100);
    let cases: &[(u64, usize, f64, WeightSpec)] = &[
        (20, 8, 0.0, WeightSpec::Unit),
        (16, 6, 0.25, WeightSpec::Divisor),
        (18, 4, 0.4, WeightSpec::Unit),
        (14, 6, 0.5, WeightSpec::Mangoldt),
    ];
    for (n_max, tau, sigma, weight) in cases {
        let (e_q, e_qp) = exact_cube_expectations(*n_max, *tau, *sigma, weight, &table);
        assert!(
            e_q >= e_qp - 1e-9,
            "N={n_max} tau={tau}: E max|Q| = {e_q} below E max|Q'| = {e_qp}"
        );
        // the block restriction's exact expectation also matches the
        // Gray-code oracle through the identity sum_j |S_j|
        let decomp = CubeDecomposition::new(*n_max, *tau, *sigma, weight, &table).unwrap();
        let exact = dirsup::cube::expected_cube_sup(&decomp, dirsup::cube::CubeMode::Exact)
            .unwrap()
            .mean;
        assert!(
            (exact - e_qp).abs() <= 1e-9 * exact.max(1.0),
            "N={n_max} tau={tau}: per-block exact {exact} vs oracle {e_qp}"
        );
    }
}

/// Same comparison at a scale where sign enumeration is infeasible:
/// paired Monte Carlo with exact maxima over the cube per draw.
#[test]
fn cube_max_dominates_block_restriction_statistically() {
    let table = sieve_primes(100);
    let n_max = 50u64;
    let tau = 8usize;
    let sigma = 0.0;
    let half = tau / 2;
    let free = tau - half;
    let z_count = 1usize << free;
    let indices = smooth_set(n_max, tau, &table).unwrap();
    let weights = WeightSpec::Unit.values(n_max).unwrap();
    let decomp = CubeDecomposition::new(n_max, tau, sigma, &WeightSpec::Unit, &table).unwrap();

    let mut w = vec![vec![0.0; z_count]; indices.len()];
    let mut member = vec![false; indices.len()];
    for (i, &n) in indices.iter().enumerate() {
        let exps = factor_exponents(n, tau, &table).unwrap();
        member[i] = decomp.blocks().iter().any(|b| b.members.binary_search(&n).is_ok());
        for zmask in 0..z_count {
            let mut parity = 0u32;
            for kk in half + 1..=tau {
                if zmask >> (kk - half - 1) & 1 == 1 {
                    parity += exps.exponent(kk);
                }
            }
            w[i][zmask] = if parity % 2 == 1 { -weights[n as usize] } else { weights[n as usize] };
        }
    }

    let draws = 4_000;
    let mut rng = ChaCha8Rng::seed_from_u64(31415);
    let mut diffs = Vec::with_capacity(draws);
    for _ in 0..draws {
        let eps: Vec<f64> = (0..indices.len())
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let mut max_q = 0.0f64;
        let mut max_qp = 0.0f64;
        for z in 0..z_count {
            let mut q = 0.0;
            let mut qp = 0.0;
            for i in 0..indices.len() {
                let v = eps[i] * w[i][z];
                q += v;
                if member[i] {
                    qp += v;
                }
            }
            max_q = max_q.max(q.abs());
            max_qp = max_qp.max(qp.abs());
        }
        diffs.push(max_q - max_qp);
    }
    let mean = diffs.iter().sum::<f64>() / draws as f64;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (draws as f64 - 1.0);
    let stderr = (var / draws as f64).sqrt();
    assert!(
        mean + 3.0 * stderr >= 0.0,
        "E max|Q| - E max|Q'| = {mean} +/- {stderr}"
    );
}

/// For a multiplicative weight the upper Khintchine functional factors
/// blockwise: `sum_j sqrt(m_j)` equals
/// `sum_j d(p_j) p_j^{-sigma} (sum over smooth cofactors of (d(m) m^{-sigma})^2)^{1/2}`,
/// computed here by independent enumeration.
#[test]
fn sqrt_mass_functional_factors_for_multiplicative_weights() {
    let table = sieve_primes(2_000);
    let cases: &[(u64, usize, f64, WeightSpec)] = &[
        (500, 8, 0.5, WeightSpec::Unit),
        (1_000, 10, 0.25, WeightSpec::Divisor),
        (2_000, 14, 0.5, WeightSpec::Unit),
    ];
    for (n, tau, sigma, weight) in cases {
        let decomp = CubeDecomposition::new(*n, *tau, *sigma, weight, &table).unwrap();
        let half = tau / 2;
        let p_half = table.prime(half).unwrap();
        let mut functional = 0.0;
        for j in half + 1..=*tau {
            let p = table.prime(j).unwrap();
            if p > *n {
                continue;
            }
            let dp = weight.value(p).unwrap() * (p as f64).powf(-sigma);
            let mut inner = 0.0;
            for m in 1..=(n / p) {
                if largest_prime_factor(m).unwrap() <= p_half {
                    let dm = weight.value(m).unwrap() * (m as f64).powf(-sigma);
                    inner += dm * dm;
                }
            }
            functional += dp * inner.sqrt();
        }
        let direct = decomp.sum_sqrt_masses();
        assert!(
            (functional - direct).abs() <= 1e-10 * direct.max(1.0),
            "N={n} tau={tau}: factored {functional} vs direct {direct}"
        );
    }
}

#[test]
fn cube_sup_does_not_depend_on_block_iteration_order() {
    // cube_sup is a sum of |S_j|; spot-check against a direct per-element walk
    let table = sieve_primes(2_000);
    let decomp = CubeDecomposition::new(2_000, 10, 0.2, &WeightSpec::Divisor, &table).unwrap();
    let signs = SignAssignment::from_seed(2_000, 808);
    let fast = cube_sup(&decomp, &signs).unwrap();
    let mut slow = 0.0;
    for b in decomp.blocks() {
        let s: f64 = b
            .members
            .iter()
            .zip(&b.coeffs)
            .map(|(&n, &c)| signs.sign(n) * c)
            .sum();
        slow += s.abs();
    }
    assert!((fast - slow).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_factorization_reconstructs(n in 1u64..100_000) {
        let table = sieve_primes(100_000);
        let tau = table.prime_pi(n.max(2)).unwrap().max(1);
        let v = factor_exponents(n, tau, &table).unwrap();
        prop_assert_eq!(v.reconstruct(&table).unwrap(), n);
    }

    #[test]
    fn prop_line_embeds_in_torus(t in -2_000.0f64..2_000.0, seed in 0u64..1_000) {
        let table = sieve_primes(50);
        let spec = PolynomialSpec::new(10, 0.2, WeightSpec::Divisor).unwrap();
        let signs = SignAssignment::from_seed(10, seed);
        let lift = bohr_lift(&spec, &signs, &table).unwrap();
        let z = TorusPoint::from_line(t, lift.tau(), &table).unwrap();
        let qt = lift.eval(&z).unwrap();
        let pt = eval_line(&spec, &signs, t, &table).unwrap();
        // phase arguments grow like t ln N, so rounding in the two routes
        // scales with |t|; a frequency bug would show up at O(1)
        let tol = 1e-14 * (1.0 + t.abs()) * (1.0 + lift.coeff_l1());
        prop_assert!((qt - pt).norm() < tol.max(1e-13));
    }
}
