//! The twelve acceptance criteria, one PASS/FAIL line each.

use std::process::Command;
use std::time::{Duration, Instant};

use btlab::arith::{self, modular, ProductBump};
use btlab::bt_constants::{self as bt, CurveId, CurveParams};
use btlab::exponent_pairs::{akb_formula, eval_word, optimize, ExponentPair, Objective, ProcessWord};
use btlab::prime_counts as pc;
use btlab::rational::{int, ratio, to_f64};
use btlab::sieve_functions::{self, two_exp_gamma};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn criterion(
    id: u32,
    name: &'static str,
    budget_secs: u64,
    body: impl FnOnce() -> (bool, String),
) -> Verdict {
    let start = Instant::now();
    let (pass, detail) = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_secs);
    Verdict {
        id,
        name,
        pass: pass && elapsed <= budget,
        detail,
        elapsed,
        budget,
    }
}

fn word(text: &str) -> ExponentPair {
    eval_word(&text.parse::<ProcessWord>().unwrap())
}

fn triple(k: (i64, i64), l: (i64, i64), n: (i64, i64)) -> ExponentPair {
    ExponentPair::new(ratio(k.0, k.1), ratio(l.0, l.1), ratio(n.0, n.1))
}

fn exponent_pairs_exact() -> (bool, String) {
    let printed = [
        ("B", triple((1, 2), (1, 2), (1, 1))),
        ("AB", triple((1, 6), (2, 3), (1, 6))),
        ("BA^2B", triple((2, 7), (4, 7), (11, 14))),
        ("A^2BA^2B", triple((1, 20), (33, 40), (1, 20))),
    ];
    let mut bad = Vec::new();
    for (w, expected) in &printed {
        if word(w) != *expected {
            bad.push(w.to_string());
        }
    }
    // The closed form printed for A^kB, k >= 2, read with k -> k+1.
    for k in 1..=8usize {
        let direct = eval_word(&ProcessWord::a_power_b(k));
        let formula = akb_formula(k as u32 + 1).unwrap();
        let d = int(2i64.pow(k as u32 + 2) - 2);
        let printed = ExponentPair::new(
            int(1) / &d,
            int(1) - int(k as i64 + 1) / &d,
            int(1) / &d,
        );
        if direct != formula || formula != printed {
            bad.push(format!("A^{k}B"));
        }
    }
    (
        bad.is_empty(),
        format!("4 printed pairs + A^kB family k=1..8; mismatches: {bad:?}"),
    )
}

fn special_pair_derivation() -> (bool, String) {
    let pair = triple((1, 20), (33, 40), (1, 20));
    let fam = CurveId::SmoothExponentPair
        .pieces(&CurveParams::pair(pair))
        .unwrap();
    let special = CurveId::SmoothSpecialPair.pieces(&CurveParams::none()).unwrap();
    let (lo, hi) = (&fam[0].lower.value, &fam[0].upper.value);
    let expected = bt::Expr::Reciprocal {
        numerator: int(160),
        offset: int(89),
        slope: int(91),
    };
    // 4/((3+κ−λ)−(3+2κ−λ)ϖ) scaled by 40 is 160/(89−91ϖ).
    let fam_scaled = match &fam[0].expr {
        bt::Expr::Reciprocal {
            numerator,
            offset,
            slope,
        } => bt::Expr::Reciprocal {
            numerator: numerator * int(40),
            offset: offset * int(40),
            slope: slope * int(40),
        },
        other => other.clone(),
    };
    let pass = *lo == ratio(9, 51)
        && *hi == ratio(9, 11)
        && fam[0].lower.closed
        && fam[0].upper.closed
        && fam_scaled == expected
        && special[0].expr == expected
        && fam[0].lower == special[0].lower
        && fam[0].upper == special[0].upper;
    (
        pass,
        format!(
            "range [{}, {}], expression {}",
            btlab::rational::to_string(lo),
            btlab::rational::to_string(hi),
            fam_scaled.render()
        ),
    )
}

const PRINTED_TABLE: [(&str, &str, &str); 6] = [
    ("3.3067", "3.3514", "1.4"),
    ("3.3455", "3.4074", "1.8"),
    ("3.3889", "3.4366", "1.3"),
    ("3.4615", "3.5294", "1.9"),
    ("3.5254", "3.5862", "1.6"),
    ("3.5918", "3.6667", "2.0"),
];

fn table_reproduction() -> (bool, String) {
    let rows = bt::table1();
    let mut values_ok = true;
    let mut pct_ok = 0;
    let mut notes = Vec::new();
    for (r, (ours, iw, pct)) in rows.iter().zip(PRINTED_TABLE) {
        values_ok &= r.ours_4dp == ours && r.iwaniec_4dp == iw;
        let exact = to_f64(&r.improvement);
        let printed: f64 = pct.parse().unwrap();
        if (exact - printed).abs() <= 0.11 {
            pct_ok += 1;
        }
        if r.improvement_1dp != pct {
            notes.push(format!(
                "varpi={} exact {:.3}% shown {}% vs printed {pct}%",
                btlab::rational::to_string(&r.varpi),
                exact,
                r.improvement_1dp
            ));
        }
    }
    (
        values_ok && pct_ok >= 5,
        format!("values match: {values_ok}; percentages within 0.11: {pct_ok}/6; one-decimal discrepancies: {notes:?}"),
    )
}

fn rankin_regime() -> (bool, String) {
    let best = optimize(&Objective::MinSum, 16).unwrap();
    let sum = best.value.clone();
    let varpi = ratio(2, 3);
    let c = bt::eval_curve(CurveId::SmoothExponentPair, &varpi, &CurveParams::pair(best.pair.clone()))
        .unwrap();
    let Some(c) = c else {
        return (false, "2/3 lies outside the optimal pair's window".into());
    };
    let cf = to_f64(&c);
    let pass = sum <= ratio(5, 6) && to_f64(&sum) > 0.829 && (5.27..=5.70).contains(&cf) && cf < 6.0;
    (
        pass,
        format!(
            "min kappa+lambda {:.9} via {}; C(2/3) = {:.5} (printed 5.2746, which differs from the computed value)",
            to_f64(&sum),
            best.word.compact(),
            cf
        ),
    )
}

fn sieve_functions_check() -> (bool, String) {
    let t = sieve_functions::solve(10.0, 1e-3).unwrap();
    let c = two_exp_gamma();
    let mut closed_err: f64 = 0.0;
    for (i, s) in t.grid().enumerate() {
        if s > 0.0 && s <= 3.0 + 1e-12 {
            closed_err = closed_err.max((t.upper[i] - c / s).abs());
        }
        if (2.0..=4.0 + 1e-12).contains(&s) {
            closed_err = closed_err.max((t.lower[i] - c * (s - 1.0).ln() / s).abs());
        }
    }
    let mut order_ok = true;
    for i in 0..t.len() {
        order_ok &= t.lower[i] <= 1.0 + 1e-12 && t.upper[i] >= 1.0 - 1e-12;
        if i > 0 {
            order_ok &= t.upper[i] <= t.upper[i - 1] + 1e-12 && t.lower[i] >= t.lower[i - 1] - 1e-12;
        }
    }
    let fine = sieve_functions::solve(10.0, 5e-4).unwrap();
    let mut halving: f64 = 0.0;
    for (i, s) in t.grid().enumerate() {
        if s >= 2.0 {
            let j = 2 * i;
            assert!((fine.grid_point(j) - s).abs() < 1e-12);
            halving = halving.max((fine.upper[j] - t.upper[i]).abs()).max((fine.lower[j] - t.lower[i]).abs());
        }
    }
    (
        closed_err < 1e-8 && order_ok && halving < 1e-6,
        format!("closed-form error {closed_err:.2e}; order/bounds {order_ok}; halving gap {halving:.2e}"),
    )
}

fn direct_kloosterman(m: i64, n: i64, q: u64) -> Complex64 {
    // Independent of the library: inverses by search, phases in f64.
    let mut s = Complex64::new(0.0, 0.0);
    let (mr, nr) = (m.rem_euclid(q as i64) as u64, n.rem_euclid(q as i64) as u64);
    for a in 0..q {
        if modular::gcd(a, q) != 1 {
            continue;
        }
        let inv = (1..q.max(2)).find(|b| (a * b) % q == 1 % q).unwrap_or(0);
        let phase = ((mr * a + nr * inv) % q) as f64 / q as f64;
        s += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase);
    }
    s
}

fn weil_ramanujan() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_prime: f64 = 0.0;
    for _ in 0..300 {
        let p = loop {
            let p = rng.gen_range(3..5000u64);
            if modular::is_prime(p) {
                break p;
            }
        };
        let (m, n) = (rng.gen_range(1..p) as i64, rng.gen_range(1..p) as i64);
        let s = arith::kloosterman(m, n, p).unwrap().norm();
        worst_prime = worst_prime.max(s / (2.0 * (p as f64).sqrt()));
    }
    let mut worst_composite: f64 = 0.0;
    for _ in 0..100 {
        let q = loop {
            let q = rng.gen_range(4..5000u64);
            if !modular::is_prime(q) {
                break q;
            }
        };
        let (m, n) = (rng.gen_range(-5000i64..5000), rng.gen_range(-5000i64..5000));
        let d = modular::gcd(modular::gcd(modular::reduce(m, q), modular::reduce(n, q)), q);
        let bound = modular::tau(q) as f64 * ((d * q) as f64).sqrt();
        let s = arith::kloosterman(m, n, q).unwrap().norm();
        worst_composite = worst_composite.max(s / bound);
    }
    let mut worst_ram: f64 = 0.0;
    for _ in 0..100 {
        let q = rng.gen_range(2..5000u64);
        let m = rng.gen_range(-20000i64..20000);
        let s = arith::kloosterman(m, 0, q).unwrap().norm();
        worst_ram = worst_ram.max(s / modular::gcd(modular::reduce(m, q), q) as f64);
    }
    let eps = 1e-9;
    (
        worst_prime <= 1.0 + eps && worst_composite <= 1.0 + eps && worst_ram <= 1.0 + eps,
        format!(
            "max |S|/bound: prime {worst_prime:.4}, composite {worst_composite:.4}, Ramanujan {worst_ram:.4}"
        ),
    )
}

fn transform_identities() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut table_err: f64 = 0.0;
    for p in [101u64, 499, 1009] {
        let t = arith::kloosterman_table(p).unwrap();
        for _ in 0..40 {
            let x = rng.gen_range(0..p) as i64;
            let direct = direct_kloosterman(x, 1, p).re / (p as f64).sqrt();
            table_err = table_err.max((t.get(x) - direct).abs());
        }
    }
    let mut plancherel: f64 = 0.0;
    let mut worst_bounded: f64 = 0.0;
    let mut degenerate = Vec::new();
    for p in [101u64, 211, 401, 809] {
        let t = arith::kloosterman_table(p).unwrap();
        for b in 2..p as i64 {
            let v = arith::vp_transform(&t, 1, b).unwrap();
            worst_bounded = worst_bounded.max(v.max_abs());
            if b % 37 == 2 {
                let direct: f64 = (0..p as i64).map(|x| (t.get(x) * t.get(b * x)).powi(2)).sum();
                plancherel = plancherel.max((v.energy() - direct).abs() / direct.max(1.0));
            }
        }
        let same = arith::vp_transform(&t, 3, 3).unwrap();
        degenerate.push(same.values[0].norm() / (p as f64).sqrt());
    }
    // V_p(0; a, a) ≈ √p: ratio near 1 and absolute growth with p.
    let grows = degenerate.iter().all(|r| (0.7..1.3).contains(r));
    (
        table_err < 1e-9 && plancherel < 1e-8 && worst_bounded < arith::VP_BOUND && grows,
        format!(
            "table error {table_err:.2e}; Plancherel {plancherel:.2e}; max |V| (a≠b) {worst_bounded:.4} < {}; |V(0;a,a)|/√p {:?}",
            arith::VP_BOUND,
            degenerate.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
        ),
    )
}

fn large_sieve() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut fails = 0;
    let mut gap: f64 = 0.0;
    for _ in 0..200 {
        let q = rng.gen_range(1..=100u64);
        let len = rng.gen_range(1..=300usize);
        let start = rng.gen_range(-500i64..500);
        let alpha: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let c = arith::large_sieve_check(q, start, &alpha).unwrap();
        if !c.pass {
            fails += 1;
        }
        gap = gap.max(c.route_gap() / c.lhs.max(1.0));
    }
    (
        fails == 0 && gap < 1e-9,
        format!("200 instances, {fails} bound failures, relative route gap {gap:.2e}"),
    )
}

/// Four nested loops over `m1, m2, n1, n2` with unit coefficients.
fn brute_congruence(q: u64, m: u64, weight: &ProductBump) -> f64 {
    let lo = weight.n.floor() as u64 + 1;
    let hi = (2.0 * weight.n).floor() as u64;
    let w: Vec<f64> = (lo..=hi).map(|t| weight.profile(t as f64)).collect();
    let units = |a: u64, b: u64| (a..=b).filter(move |&v| modular::gcd(v, q) == 1);
    let mut total = 0.0;
    for m1 in units(m + 1, 2 * m) {
        for m2 in units(m + 1, 2 * m) {
            for n1 in units(lo, hi) {
                for n2 in units(lo, hi) {
                    if (m1 * n1) % q == (m2 * n2) % q {
                        total += w[(n1 - lo) as usize] * w[(n2 - lo) as usize];
                    }
                }
            }
        }
    }
    total
}

fn congruence_oracle() -> (bool, String) {
    let ones = vec![1.0; 20];
    let small_w = ProductBump::new(200.0);
    let large_w = ProductBump::new(400.0);
    let small = arith::congruence_count(53, 20, &ones, &ones, &small_w).unwrap();
    let large = arith::congruence_count(53, 20, &ones, &ones, &large_w).unwrap();
    let gap = [(&small, &small_w), (&large, &large_w)]
        .iter()
        .map(|(c, w)| {
            let brute = brute_congruence(53, 20, w);
            (c.r_exact - brute).abs() / brute.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    let pass = small.relative_error < arith::CONGRUENCE_REL_ERROR_BOUND
        && large.relative_error < arith::CONGRUENCE_REL_ERROR_BOUND
        && large.relative_error < small.relative_error
        && gap < 1e-9;
    (
        pass,
        format!(
            "relative error N=200 {:.3e}, N=400 {:.3e}, threshold {:.0e}, brute-force gap {gap:.1e}",
            small.relative_error,
            large.relative_error,
            arith::CONGRUENCE_REL_ERROR_BOUND
        ),
    )
}

fn montgomery_vaughan() -> (bool, String) {
    let xs = [10_000u64, 100_000, 1_000_000, 10_000_000];
    let checks = pc::mv_grid(&xs, 1000).unwrap();
    let expected: u64 = xs.iter().map(|&x| 1000.min(x / 10) - 1).sum();
    let fails: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| (c.x, c.q)).collect();
    let tight = checks
        .iter()
        .map(|c| c.max_count as f64 / c.bound)
        .fold(0.0, f64::max);
    (
        fails.is_empty() && checks.len() as u64 == expected,
        format!("{} checks, failures {fails:?}, largest count/bound {tight:.4}", checks.len()),
    )
}

fn prime_cross_validation() -> (bool, String) {
    let simple = pc::simple_sieve(1_000_000);
    let seg = pc::sieve_primes(1_000_000).unwrap();
    let mut agree = (0..=1_000_000u64).all(|n| simple[n as usize] == seg.is_prime(n));
    let mut counts = Vec::new();
    for x in [1_000u64, 10_000, 100_000, 1_000_000] {
        let a = pc::SegmentedSieve::new(x).unwrap().count();
        let b = pc::simple_prime_count(x as usize);
        agree &= a == b;
        counts.push(a);
    }
    let primes = pc::prime_list_u32(1_000_000).unwrap();
    let mut partitions = 0;
    let mut partition_ok = true;
    for x in [1_000u64, 10_000, 100_000, 1_000_000] {
        let pi = primes.partition_point(|&p| p as u64 <= x) as u64;
        for q in [2u64, 3, 10, 30, 97, 210, 999] {
            let r = pc::pi_in_ap_from(&primes, x, q).unwrap();
            let dividing = modular::factorize(q).iter().filter(|(p, _)| *p <= x).count() as u64;
            partition_ok &= r.coprime_total() + dividing == pi && r.counts.len() as u64 == modular::euler_phi(q);
            partitions += 1;
        }
    }
    (
        agree && partition_ok && counts == [168, 1229, 9592, 78498],
        format!("pi(10^3..10^6) = {counts:?}; indicator agreement {agree}; {partitions} partition identities hold: {partition_ok}"),
    )
}

const CLI_RUNS: &[&[&str]] = &[
    &["exppairs", "--optimize", "min-sum", "--depth", "6"],
    &["exppairs", "--optimize", "max-g", "--varpi", "2/3", "--depth", "10", "--format", "json"],
    &["exppairs", "--list", "--depth", "5", "--format", "csv"],
    &["sieve-fns", "--s-max", "4", "--step", "0.01", "--format", "csv"],
    &["constants", "--varpi", "2/3", "--assume", "smooth"],
    &["constants", "--catalog", "--format", "json"],
    &["table1", "--format", "json"],
    &["figures", "--min", "0.45", "--max", "0.5", "--step", "0.01", "--depth", "8"],
    &["sums", "weil", "--seed", "11", "--format", "csv"],
    &["sums", "large-sieve", "--seed", "11", "--cases", "40", "--format", "json"],
    &["sums", "moment", "--p", "101", "--seed", "3"],
    &["sums", "characters", "--q", "1155", "--cases", "20", "--seed", "5", "--format", "csv"],
    &["sums", "rstar", "--q", "2310", "--cases", "50", "--seed", "5", "--format", "csv"],
    &["verify-bt", "--x", "100000", "--q", "3,10,101", "--format", "json"],
];

fn determinism() -> (bool, String) {
    let exe = env!("CARGO_BIN_EXE_btlab");
    let mut differing = Vec::new();
    for args in CLI_RUNS {
        let a = Command::new(exe).args(*args).output().unwrap();
        let b = Command::new(exe).args(*args).env("BTLAB_THREADS", "3").output().unwrap();
        if a.stdout != b.stdout || !a.status.success() || a.status.code() != b.status.code() {
            differing.push(args.join(" "));
        }
    }
    (
        differing.is_empty(),
        format!("{} invocations run twice (second with 3 threads); differing: {differing:?}", CLI_RUNS.len()),
    )
}

#[test]
fn acceptance() {
    let verdicts = vec![
        criterion(1, "exponent-pair exactness", 1, exponent_pairs_exact),
        criterion(2, "special pair derivation", 1, special_pair_derivation),
        criterion(3, "comparison table", 1, table_reproduction),
        criterion(4, "Rankin regime", 30, rankin_regime),
        criterion(5, "sieve functions", 10, sieve_functions_check),
        criterion(6, "Weil and Ramanujan bounds", 10, weil_ramanujan),
        criterion(7, "transform identities", 60, transform_identities),
        criterion(8, "large sieve", 30, large_sieve),
        criterion(9, "congruence count", 300, congruence_oracle),
        criterion(10, "Montgomery-Vaughan grid", 300, montgomery_vaughan),
        criterion(11, "prime-count cross-validation", 60, prime_cross_validation),
        criterion(12, "CLI determinism", 300, determinism),
    ];
    for v in &verdicts {
        println!(
            "criterion {:>2} {:<30} {} ({:.2}s of {}s): {}",
            v.id,
            v.name,
            if v.pass { "PASS" } else { "FAIL" },
            v.elapsed.as_secs_f64(),
            v.budget.as_secs(),
            v.detail
        );
    }
    let failed: Vec<u32> = verdicts.iter().filter(|v| !v.pass).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

