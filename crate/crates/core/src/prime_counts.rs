//! Segmented odd-only sieve, primes in arithmetic progressions, the
//! Montgomery–Vaughan check and empirical Brun–Titchmarsh ratios.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::modular::{euler_phi, gcd};
use crate::bt_constants::CurveInstance;
use crate::error::{out_of_range, Result};
use crate::numfmt;
use crate::rational;

/// Odd numbers per segment.
pub const DEFAULT_SEGMENT_ODDS: usize = 1 << 20;

/// Largest modulus for residue tables (one counter per residue).
pub const MAX_RESIDUE_MODULUS: u64 = 1 << 28;

/// Largest sieve limit accepted.
pub const MAX_LIMIT: u64 = 1 << 40;

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Plain sieve of Eratosthenes over all integers; the reference
/// implementation for the segmented sieve.
pub fn simple_sieve(limit: usize) -> Vec<bool> {
    let mut is_prime = vec![true; limit + 1];
    is_prime[0] = false;
    if limit >= 1 {
        is_prime[1] = false;
    }
    let mut p = 2;
    while p * p <= limit {
        if is_prime[p] {
            let mut m = p * p;
            while m <= limit {
                is_prime[m] = false;
                m += p;
            }
        }
        p += 1;
    }
    is_prime
}

pub fn simple_prime_count(limit: usize) -> u64 {
    simple_sieve(limit).iter().filter(|&&b| b).count() as u64
}

/// Bits for the odd numbers `2i+1`, `i` in `[first, first + len)`.
#[derive(Debug, Clone)]
pub struct Segment {
    first: u64,
    len: usize,
    words: Vec<u64>,
}

impl Segment {
    fn bit(&self, j: usize) -> bool {
        self.words[j >> 6] >> (j & 63) & 1 == 1
    }

    /// Odd primes in the segment, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(move |(w, &word)| {
            let base = self.first + 64 * w as u64;
            BitIter(word).map(move |b| 2 * (base + b as u64) + 1)
        })
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Odd numbers covered.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_odd_prime(&self, n: u64) -> bool {
        let i = (n - 1) / 2 - self.first;
        self.bit(i as usize)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Segmented sieve of Eratosthenes on odd numbers. Memory is the base
/// primes up to `√limit` plus one bitmap per segment in flight.
#[derive(Debug, Clone)]
pub struct SegmentedSieve {
    limit: u64,
    segment_odds: usize,
    base: Vec<u32>,
}

impl SegmentedSieve {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_segment(limit, DEFAULT_SEGMENT_ODDS)
    }

    /// `segment_odds` must be a positive multiple of 64.
    pub fn with_segment(limit: u64, segment_odds: usize) -> Result<Self> {
        if limit < 2 {
            return Err(out_of_range("limit", limit, ">= 2"));
        }
        if limit > MAX_LIMIT {
            return Err(out_of_range("limit", limit, format!("<= {MAX_LIMIT}")));
        }
        if segment_odds == 0 || segment_odds % 64 != 0 {
            return Err(out_of_range("segment_odds", segment_odds, "positive multiple of 64"));
        }
        let root = isqrt(limit) as usize;
        let base = simple_sieve(root)
            .iter()
            .enumerate()
            .skip(3)
            .filter(|&(_, &b)| b)
            .map(|(p, _)| p as u32)
            .collect();
        Ok(Self {
            limit,
            segment_odds,
            base,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn odd_count(&self) -> u64 {
        self.limit.div_ceil(2)
    }

    pub fn segment_count(&self) -> usize {
        self.odd_count().div_ceil(self.segment_odds as u64) as usize
    }

    pub fn segment(&self, k: usize) -> Segment {
        let first = k as u64 * self.segment_odds as u64;
        let len = (self.odd_count() - first).min(self.segment_odds as u64) as usize;
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if len % 64 != 0 {
            *words.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        if first == 0 {
            words[0] &= !1;
        }
        let lo = 2 * first + 1;
        let hi = 2 * (first + len as u64) - 1;
        for &p in &self.base {
            let p = p as u64;
            let sq = p * p;
            if sq > hi {
                break;
            }
            let mut m = if sq >= lo { sq } else { lo.div_ceil(p) * p };
            if m % 2 == 0 {
                m += p;
            }
            let mut j = ((m - 1) / 2 - first) as usize;
            let step = p as usize;
            while j < len {
                words[j >> 6] &= !(1u64 << (j & 63));
                j += step;
            }
        }
        Segment { first, len, words }
    }

    /// Parallel map over segments; results come back in segment order.
    pub fn map_segments<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&Segment) -> T + Sync + Send,
    {
        (0..self.segment_count())
            .into_par_iter()
            .map(|k| f(&self.segment(k)))
            .collect()
    }

    /// `π(limit)`.
    pub fn count(&self) -> u64 {
        let odd: u64 = self.map_segments(Segment::count).into_iter().sum();
        odd + 1
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut out = vec![2];
        for chunk in self.map_segments(|s| s.primes().collect::<Vec<_>>()) {
            out.extend(chunk);
        }
        out
    }
}

/// Odd-only bitmap of the primes up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeIndicator {
    limit: u64,
    words: Vec<u64>,
}

impl PrimeIndicator {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n == 2 {
            return self.limit >= 2;
        }
        if n < 3 || n % 2 == 0 || n > self.limit {
            return false;
        }
        let i = ((n - 1) / 2) as usize;
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        1 + self.words.iter().map(|w| w.count_ones() as u64).sum::<u64>()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::once(2).chain(self.words.iter().enumerate().flat_map(|(w, &word)| {
            BitIter(word).map(move |b| 2 * (64 * w as u64 + b as u64) + 1)
        }))
    }

    pub fn byte_size(&self) -> usize {
        self.words.len() * 8
    }
}

/// Materialized indicator, `limit/16` bytes. Use [`SegmentedSieve`] to
/// stream larger ranges.
pub fn sieve_primes(limit: u64) -> Result<PrimeIndicator> {
    let sieve = SegmentedSieve::new(limit)?;
    let mut words = Vec::with_capacity(sieve.odd_count().div_ceil(64) as usize);
    for seg in sieve.map_segments(|s| s.words.clone()) {
        words.extend(seg);
    }
    Ok(PrimeIndicator { limit, words })
}

/// `π(x; q, a)` for every residue `a` coprime to `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueCounts {
    pub x: u64,
    pub q: u64,
    pub phi_q: u64,
    /// `(a, π(x;q,a))` for the `φ(q)` coprime residues, ascending in `a`.
    pub counts: Vec<(u64, u64)>,
    /// Primes `p ≤ x` dividing `q`.
    pub dividing_primes: u64,
}

impl ResidueCounts {
    fn from_dense(x: u64, q: u64, dense: Vec<u64>) -> Self {
        let mut counts = Vec::new();
        let mut dividing = 0;
        for (a, &c) in dense.iter().enumerate() {
            if gcd(a as u64, q) == 1 {
                counts.push((a as u64, c));
            } else {
                dividing += c;
            }
        }
        Self {
            x,
            q,
            phi_q: euler_phi(q),
            counts,
            dividing_primes: dividing,
        }
    }

    pub fn get(&self, a: u64) -> Option<u64> {
        let a = a % self.q;
        self.counts
            .binary_search_by_key(&a, |&(r, _)| r)
            .ok()
            .map(|i| self.counts[i].1)
    }

    /// Largest count; the smallest residue wins ties.
    pub fn max(&self) -> (u64, u64) {
        self.counts
            .iter()
            .copied()
            .fold((0, 0), |best, (a, c)| if c > best.1 { (a, c) } else { best })
    }

    pub fn coprime_total(&self) -> u64 {
        self.counts.iter().map(|&(_, c)| c).sum()
    }

    /// `π(x)`.
    pub fn total(&self) -> u64 {
        self.coprime_total() + self.dividing_primes
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,q,a,count\n");
        for &(a, c) in &self.counts {
            out.push_str(&format!("{},{},{},{}\n", self.x, self.q, a, c));
        }
        out
    }
}

fn check_modulus(q: u64, x: u64, min_q: u64) -> Result<()> {
    if q < min_q || q >= x {
        return Err(out_of_range("q", q, format!("[{min_q}, x) with x = {x}")));
    }
    if q > MAX_RESIDUE_MODULUS {
        return Err(out_of_range("q", q, format!("<= {MAX_RESIDUE_MODULUS}")));
    }
    Ok(())
}

fn residue_counts(x: u64, q: u64) -> Result<ResidueCounts> {
    let sieve = SegmentedSieve::new(x)?;
    let qs = q as usize;
    let dense = (0..sieve.segment_count())
        .into_par_iter()
        .fold(
            || vec![0u64; qs],
            |mut acc, k| {
                for p in sieve.segment(k).primes() {
                    acc[(p % q) as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; qs],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let mut dense = dense;
    dense[(2 % q) as usize] += 1;
    Ok(ResidueCounts::from_dense(x, q, dense))
}

/// One sieve pass classifying the primes up to `x` modulo `q`.
pub fn pi_in_ap(x: u64, q: u64) -> Result<ResidueCounts> {
    check_modulus(q, x, 2)?;
    residue_counts(x, q)
}

/// Same as [`pi_in_ap`] over an ascending prime list that covers `x`.
pub fn pi_in_ap_from(primes: &[u32], x: u64, q: u64) -> Result<ResidueCounts> {
    check_modulus(q, x, 1)?;
    let end = primes.partition_point(|&p| p as u64 <= x);
    let q32 = q as u32;
    let mut dense = vec![0u64; q as usize];
    if q <= u32::MAX as u64 {
        for &p in &primes[..end] {
            dense[(p % q32) as usize] += 1;
        }
    } else {
        for &p in &primes[..end] {
            dense[(p as u64 % q) as usize] += 1;
        }
    }
    Ok(ResidueCounts::from_dense(x, q, dense))
}

/// Primes up to `limit` as `u32`, for repeated residue passes.
pub fn prime_list_u32(limit: u64) -> Result<Vec<u32>> {
    if limit > u32::MAX as u64 {
        return Err(out_of_range("limit", limit, format!("<= {}", u32::MAX)));
    }
    Ok(SegmentedSieve::new(limit)?
        .primes()
        .into_iter()
        .map(|p| p as u32)
        .collect())
}

/// `max_a π(x;q,a) ≤ 2x/(φ(q) log(x/q))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MvCheck {
    pub x: u64,
    pub q: u64,
    pub max_residue: u64,
    pub max_count: u64,
    pub bound: f64,
    pub pass: bool,
}

pub fn mv_bound(x: u64, q: u64) -> f64 {
    2.0 * x as f64 / (euler_phi(q) as f64 * (x as f64 / q as f64).ln())
}

fn mv_from(counts: &ResidueCounts) -> MvCheck {
    let (a, c) = counts.max();
    let bound = mv_bound(counts.x, counts.q);
    MvCheck {
        x: counts.x,
        q: counts.q,
        max_residue: a,
        max_count: c,
        bound,
        pass: (c as f64) <= bound,
    }
}

pub fn mv_check(x: u64, q: u64) -> Result<MvCheck> {
    check_modulus(q, x, 1)?;
    Ok(mv_from(&residue_counts(x, q)?))
}

/// Checks every `x` in `xs` against `q = 2..=min(q_max, x/10)` using one
/// sieve to the largest `x`. Results are ordered by `x`, then `q`.
pub fn mv_grid(xs: &[u64], q_max: u64) -> Result<Vec<MvCheck>> {
    let top = xs.iter().copied().max().unwrap_or(2).max(2);
    let primes = prime_list_u32(top)?;
    let mut out = Vec::new();
    for &x in xs {
        let hi = q_max.min(x / 10);
        let chunk: Result<Vec<MvCheck>> = (2..=hi)
            .into_par_iter()
            .map(|q| pi_in_ap_from(&primes, x, q).map(|c| mv_from(&c)))
            .collect();
        out.extend(chunk?);
    }
    Ok(out)
}

/// `max_a π(x;q,a)·φ(q)·log x / x` next to a curve value at
/// `ϖ = log q / log x`. Reported, never asserted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BtEmpirical {
    pub x: u64,
    pub q: u64,
    pub curve: String,
    pub varpi: f64,
    pub max_residue: u64,
    pub max_count: u64,
    pub mv_bound: f64,
    pub ratio: f64,
    pub c_value: Option<f64>,
}

pub fn bt_empirical_from(counts: &ResidueCounts, curve: &CurveInstance) -> Result<BtEmpirical> {
    let (x, q) = (counts.x, counts.q);
    let (a, c) = counts.max();
    let varpi = (q as f64).ln() / (x as f64).ln();
    let exact = rational::from_f64(varpi).expect("finite varpi");
    let c_value = curve.eval(&exact)?.map(|v| rational::to_f64(&v));
    Ok(BtEmpirical {
        x,
        q,
        curve: curve.label(),
        varpi,
        max_residue: a,
        max_count: c,
        mv_bound: mv_bound(x, q),
        ratio: c as f64 * counts.phi_q as f64 * (x as f64).ln() / x as f64,
        c_value,
    })
}

pub fn bt_empirical(x: u64, q: u64, curve: &CurveInstance) -> Result<BtEmpirical> {
    bt_empirical_from(&pi_in_ap(x, q)?, curve)
}

pub fn summary_csv(rows: &[BtEmpirical]) -> String {
    let mut out = String::from("x,q,max_a,max_count,mv_bound,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.x,
            r.q,
            r.max_residue,
            r.max_count,
            numfmt::sig(r.mv_bound, 10),
            numfmt::sig(r.ratio, 10)
        ));
    }
    out
}
