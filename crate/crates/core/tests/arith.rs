use std::f64::consts::TAU;

use btlab::arith::dft::{naive_dft, Direction, PrimeDft};
use btlab::arith::incomplete::{kloosterman_completion_bound, polya_vinogradov_bound};
use btlab::arith::modular::{euler_phi, gcd, is_prime, mobius, tau};
use btlab::arith::*;
use btlab::exponent_pairs::eval_word;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brute_inverse(a: u64, q: u64) -> Option<u64> {
    (0..q).find(|&b| (a * b) % q == 1 % q)
}

fn e(num: u64, q: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (num % q) as f64 / q as f64)
}

/// Direct definition with inverses found by search.
fn oracle_kloosterman(m: i64, n: i64, q: u64) -> Complex64 {
    let (m, n) = (m.rem_euclid(q as i64) as u64, n.rem_euclid(q as i64) as u64);
    (0..q)
        .filter_map(|a| brute_inverse(a, q).map(|inv| e(m * a + n * inv, q)))
        .sum()
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kloosterman_matches_definition(q in 1u64..400, m in -1000i64..1000, n in -1000i64..1000) {
        let s = kloosterman(m, n, q).unwrap();
        let o = oracle_kloosterman(m, n, q);
        prop_assert!((s - o).norm() < 1e-9);
        prop_assert!(s.im.abs() < 1e-9);
    }

    #[test]
    fn weil_bound_for_primes(idx in 0usize..500, m in 1i64..100_000, n in 1i64..100_000) {
        let ps = primes_up_to(3600);
        let p = ps[idx % ps.len()];
        let s = kloosterman(m, n, p).unwrap().norm();
        prop_assert!(s <= 2.0 * (p as f64).sqrt() + 1e-9);
    }

    #[test]
    fn twisted_multiplicativity(q in 2u64..60, r in 2u64..60, m in -500i64..500, n in -500i64..500) {
        prop_assume!(gcd(q, r) == 1);
        let qi = brute_inverse(q % r, r).unwrap() as i64;
        let ri = brute_inverse(r % q, q).unwrap() as i64;
        let lhs = kloosterman(m, n, q * r).unwrap();
        let rhs = kloosterman(m * ri, n * ri, q).unwrap() * kloosterman(m * qi, n * qi, r).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-8);
    }

    #[test]
    fn ramanujan_divisor_formula(q in 1u64..2000, m in -5000i64..5000) {
        let d_mq = gcd(m.rem_euclid(q as i64) as u64, q);
        let expected: i64 = (1..=d_mq)
            .filter(|d| d_mq % d == 0)
            .map(|d| mobius(q / d) * d as i64)
            .sum();
        let s = ramanujan(m, q).unwrap();
        prop_assert!((s - expected as f64).abs() < 1e-7);
        prop_assert!(s.abs() <= d_mq as f64 + 1e-9);
    }

    #[test]
    fn character_values_are_multiplicative(q in 1u64..300, a in -1000i64..1000, b in -1000i64..1000, pick in 0usize..10_000) {
        let g = CharacterGroup::new(q).unwrap();
        let chi = pick % g.size();
        let lhs = g.value(chi, a * b);
        let rhs = g.value(chi, a) * g.value(chi, b);
        prop_assert!((lhs - rhs).norm() < 1e-9);
        let conj = g.conjugate(chi);
        prop_assert!((g.value(conj, a) - g.value(chi, a).conj()).norm() < 1e-9);
    }

    #[test]
    fn prime_dft_matches_naive(idx in 0usize..60, seed in 0u64..1000) {
        let ps = primes_up_to(300);
        let p = ps[idx % ps.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<Complex64> = (0..p).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let dft = PrimeDft::new(p).unwrap();
        for dir in [Direction::Forward, Direction::Inverse] {
            let fast = dft.transform(&x, dir);
            let slow = naive_dft(&x, dir);
            let err = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-9 * p as f64);
        }
    }

    #[test]
    fn vp_plancherel(idx in 1usize..100, a in 1i64..10_000, b in 1i64..10_000) {
        let ps = primes_up_to(600);
        let p = ps[idx % ps.len()];
        prop_assume!(p > 2 && a % p as i64 != 0 && b % p as i64 != 0);
        let t = kloosterman_table(p).unwrap();
        let v = vp_transform(&t, a, b).unwrap();
        let direct: f64 = (0..p as i64).map(|x| (t.get(a * x) * t.get(b * x)).powi(2)).sum();
        prop_assert!((v.energy() - direct).abs() < 1e-8 * direct.max(1.0));
    }

    #[test]
    fn large_sieve_routes_agree(q in 1u64..=100, len in 1usize..=300, start in -1000i64..1000, seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha: Vec<Complex64> = (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let c = large_sieve_check(q, start, &alpha).unwrap();
        prop_assert!(c.pass);
        prop_assert!(c.route_gap() <= 1e-9 * c.lhs.max(1.0));
    }

    #[test]
    fn kloosterman_completion(q in 3u64..=2310, h in -5000i64..5000, start in -5000i64..5000, frac in 0.0f64..1.0) {
        let len = 2 + ((q - 2) as f64 * frac) as u64;
        let pair = eval_word(&"AB".parse().unwrap());
        let s = incomplete_kloosterman(h, q, Interval::new(start, len), &pair).unwrap();
        prop_assert!(s.abs <= kloosterman_completion_bound(h, q));
    }

    #[test]
    fn polya_vinogradov_for_prime_moduli(idx in 0usize..300, start in 0i64..10_000, len in 1u64..5000, pick in 1usize..10_000) {
        let ps: Vec<u64> = primes_up_to(2000).into_iter().filter(|&p| p > 2).collect();
        let q = ps[idx % ps.len()];
        let g = CharacterGroup::new(q).unwrap();
        let chi = 1 + pick % (g.size() - 1);
        let s = incomplete_char_sum(&g, chi, Interval::new(start, len)).unwrap();
        prop_assert!(s.abs <= polya_vinogradov_bound(q));
    }
}

#[test]
fn table_matches_definition_everywhere() {
    for p in [3u64, 5, 7, 101, 211] {
        let t = kloosterman_table(p).unwrap();
        for x in 0..p as i64 {
            let o = oracle_kloosterman(x, 1, p).re / (p as f64).sqrt();
            assert!((t.get(x) - o).abs() < 1e-9, "p={p} x={x}");
        }
        assert!(t.max_abs_nonzero() <= 2.0 + 1e-12);
    }
    assert!(kloosterman_table(2).is_err());
    assert!(kloosterman_table(91).is_err());
}

#[test]
fn character_orthogonality() {
    for q in 1u64..=50 {
        let g = CharacterGroup::new(q).unwrap();
        assert_eq!(g.size() as u64, euler_phi(q));
        for chi in 0..g.size() {
            for psi in 0..g.size() {
                let s: Complex64 = (0..q as i64).map(|n| g.value(chi, n) * g.value(psi, n).conj()).sum();
                let expected = if chi == psi { euler_phi(q) as f64 } else { 0.0 };
                assert!((s - expected).norm() < 1e-9, "q={q} chi={chi} psi={psi}");
            }
        }
        for n in 0..q as i64 {
            let s: Complex64 = (0..g.size()).map(|chi| g.value(chi, n)).sum();
            let expected = if n as u64 % q == 1 % q && gcd(n as u64, q) == 1 { euler_phi(q) as f64 } else { 0.0 };
            assert!((s - expected).norm() < 1e-9, "q={q} n={n}");
        }
    }
}

#[test]
fn vp_bounded_off_diagonal_at_small_primes() {
    for p in primes_up_to(101).into_iter().filter(|&p| p > 2) {
        let t = kloosterman_table(p).unwrap();
        for b in 2..p as i64 {
            assert!(vp_transform(&t, 1, b).unwrap().max_abs() < VP_BOUND, "p={p} b={b}");
        }
    }
}

#[test]
fn kl_moment_first_and_second() {
    let p = 101;
    let t = kloosterman_table(p).unwrap();
    let m = kl_moment(&t, 1, &[1], &[1.0]).unwrap();
    let direct: f64 = (0..p as i64).map(|x| t.get(x).powi(2)).sum();
    assert!((m.moment - direct).abs() < 1e-9);
    assert!(kl_moment(&t, 0, &[1], &[1.0]).is_err());
    assert!(kl_moment(&t, 1, &[0], &[1.0]).is_err());
    assert!(kl_moment(&t, 1, &[1], &[1.5]).is_err());

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for p in [101u64, 211, 307, 499] {
        let t = kloosterman_table(p).unwrap();
        let subset: Vec<u64> = rand::seq::index::sample(&mut rng, p as usize, 20).into_iter().map(|i| i as u64 + 1).collect();
        let beta: Vec<f64> = (0..20).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
        let m = kl_moment(&t, 2, &subset, &beta).unwrap();
        assert!(m.ratio < KL_MOMENT_NU2_BOUND, "p={p} ratio={}", m.ratio);
    }
}

/// `Σ α_{m1} β_{m2} F(n1, n2)` over the congruence, by four nested loops.
fn brute_congruence(q: u64, m: u64, alpha: &[f64], beta: &[f64], w: &ProductBump) -> f64 {
    let n = w.scale();
    let (lo, hi) = (n.floor() as u64 + 1, (2.0 * n).floor() as u64);
    let mut total = 0.0;
    for m1 in m + 1..=2 * m {
        for m2 in m + 1..=2 * m {
            if gcd(m1, q) != 1 || gcd(m2, q) != 1 {
                continue;
            }
            for n1 in lo..=hi {
                if gcd(n1, q) != 1 {
                    continue;
                }
                for n2 in lo..=hi {
                    if gcd(n2, q) == 1 && (m1 * n1) % q == (m2 * n2) % q {
                        total += alpha[(m1 - m - 1) as usize] * beta[(m2 - m - 1) as usize] * w.value(n1 as f64, n2 as f64);
                    }
                }
            }
        }
    }
    total
}

#[test]
fn congruence_count_matches_four_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (q, m, n) in [(7u64, 5u64, 12.0), (30, 6, 20.0), (53, 20, 60.0), (64, 8, 40.0)] {
        let alpha: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let beta: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let w = ProductBump::new(n);
        let fast = congruence_count(q, m, &alpha, &beta, &w).unwrap();
        let slow = brute_congruence(q, m, &alpha, &beta, &w);
        assert!((fast.r_exact - slow).abs() < 1e-9 * slow.abs().max(1.0), "q={q}: {} vs {slow}", fast.r_exact);
    }
}

#[test]
fn frozen_diagnostic_thresholds() {
    let q = 30030;
    let pair = eval_word(&"AB".parse().unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut rstar: f64 = 0.0;
    let mut smooth: f64 = 0.0;
    for _ in 0..200 {
        let h = rng.gen_range(1..q as i64);
        let len = rng.gen_range(2..=q);
        let start = rng.gen_range(0..q as i64);
        let s = incomplete_kloosterman(h, q, Interval::new(start, len), &pair).unwrap();
        rstar = rstar.max(s.rstar_ratio);
        smooth = smooth.max(s.smooth_ratio);
    }
    assert!(rstar < RSTAR_RATIO_BOUND, "{rstar}");
    assert!(smooth < KLOOSTERMAN_SMOOTH_RATIO_BOUND, "{smooth}");

    let g = CharacterGroup::new(q).unwrap();
    let len = (q as f64).powf(0.4).round() as u64;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let chi = rng.gen_range(1..g.size());
        let s = incomplete_char_sum(&g, chi, Interval::new(rng.gen_range(0..q as i64), len)).unwrap();
        worst = worst.max(btlab::arith::incomplete::smooth_char_ratio(s.abs, q, len, &pair));
    }
    assert!(worst < CHAR_SMOOTH_RATIO_BOUND, "{worst}");
    assert_eq!(tau(q), 64);
}
