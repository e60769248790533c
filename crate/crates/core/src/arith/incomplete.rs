//! Incomplete character sums and incomplete Kloosterman sums over intervals,
//! with the normalizations used to compare them against the classical and
//! conjectural bounds.

use num_complex::Complex64;
use serde::Serialize;

use super::characters::{CharIndex, CharacterGroup};
use super::modular::{e_frac, gcd, inv_mod, mul_mod, reduce, tau};
use crate::error::{out_of_range, Error, Result};
use crate::exponent_pairs::ExponentPair;
use crate::rational::to_f64;

/// Integer interval `[start, start + len − 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub start: i64,
    pub len: u64,
}

impl Interval {
    pub fn new(start: i64, len: u64) -> Self {
        Self { start, len }
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        let start = self.start;
        (0..self.len as i64).map(move |i| start + i)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CharSum {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// `|sum| / (|I|^{1−1/r} q^{(r+1)/(4r²)})` for `r = 1, 2, 3`.
    pub burgess_ratios: [f64; 3],
}

/// `Σ_{n ∈ I} χ(n)` for a non-principal `χ`.
pub fn incomplete_char_sum(
    group: &CharacterGroup,
    chi: CharIndex,
    interval: Interval,
) -> Result<CharSum> {
    if chi >= group.size() {
        return Err(out_of_range("chi", chi, format!("[0, {})", group.size())));
    }
    if group.is_principal(chi) {
        return Err(Error::InvalidArgument(
            "incomplete character sums need a non-principal character".into(),
        ));
    }
    let sum: Complex64 = interval.iter().map(|n| group.value(chi, n)).sum();
    let q = group.modulus() as f64;
    let len = interval.len as f64;
    let abs = sum.norm();
    let burgess_ratios = [1.0f64, 2.0, 3.0].map(|r| {
        abs / (len.powf(1.0 - 1.0 / r) * q.powf((r + 1.0) / (4.0 * r * r)))
    });
    Ok(CharSum {
        re: sum.re,
        im: sum.im,
        abs,
        burgess_ratios,
    })
}

/// `|sum| / (q^κ |I|^{λ−κ})`.
pub fn smooth_char_ratio(abs_sum: f64, q: u64, len: u64, pair: &ExponentPair) -> f64 {
    let (k, l) = (to_f64(&pair.kappa), to_f64(&pair.lambda));
    abs_sum / ((q as f64).powf(k) * (len as f64).powf(l - k))
}

/// Pólya–Vinogradov completion bound `√q log q` for a non-principal character.
pub fn polya_vinogradov_bound(q: u64) -> f64 {
    let q = q as f64;
    q.sqrt() * q.ln()
}

#[derive(Debug, Clone, Serialize)]
pub struct IncompleteKloosterman {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// `|sum| / (|I|^{1/2} (h, q)^{1/2})`.
    pub rstar_ratio: f64,
    /// `|sum| / (q^κ |I|^{λ−κ} (h, q)^ν)`.
    pub smooth_ratio: f64,
}

/// `Σ_{n ∈ I, (n,q)=1} e(h n̄ / q)` for `1 < |I| ≤ q`.
pub fn incomplete_kloosterman(
    h: i64,
    q: u64,
    interval: Interval,
    pair: &ExponentPair,
) -> Result<IncompleteKloosterman> {
    super::modular::check_modulus(q)?;
    if interval.len > q || interval.len < 2 {
        return Err(out_of_range("|I|", interval.len, format!("(1, {q}]")));
    }
    let hr = reduce(h, q);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in interval.iter() {
        if let Some(n_inv) = inv_mod(reduce(n, q), q) {
            sum += e_frac(mul_mod(hr, n_inv, q), q);
        }
    }
    let d = gcd(hr, q) as f64;
    let len = interval.len as f64;
    let abs = sum.norm();
    let (k, l, nu) = (to_f64(&pair.kappa), to_f64(&pair.lambda), to_f64(&pair.nu));
    Ok(IncompleteKloosterman {
        re: sum.re,
        im: sum.im,
        abs,
        rstar_ratio: abs / (len.sqrt() * d.sqrt()),
        smooth_ratio: abs / ((q as f64).powf(k) * len.powf(l - k) * d.powf(nu)),
    })
}

/// Completion bound `τ(q) √((h,q) q) (2 + log q)` for incomplete
/// Kloosterman sums `Σ_{n∈I} e(h n̄/q)` with `|I| ≤ q`.
pub fn kloosterman_completion_bound(h: i64, q: u64) -> f64 {
    let qf = q as f64;
    let d = gcd(reduce(h, q), q).max(1) as f64;
    tau(q) as f64 * (d * qf).sqrt() * (2.0 + qf.ln())
}
