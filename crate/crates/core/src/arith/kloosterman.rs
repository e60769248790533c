//! Complete Kloosterman and Ramanujan sums, bulk tables of normalized
//! Kloosterman sums to prime moduli, the `V_p` transform and `2ν`-th moments.

use std::sync::Arc;

use num_complex::Complex64;

use super::dft::{Direction, PrimeDft};
use super::modular::{check_modulus, gcd, inv_mod, is_prime, mul_mod, reduce};
use crate::error::{out_of_range, Error, Result};

/// `S(m, n; q) = Σ*_{a mod q} e((m a + n ā)/q)` by direct summation.
pub fn kloosterman(m: i64, n: i64, q: u64) -> Result<Complex64> {
    check_modulus(q)?;
    let (mr, nr) = (reduce(m, q), reduce(n, q));
    let mut total = Complex64::new(0.0, 0.0);
    for a in 0..q {
        let Some(a_inv) = inv_mod(a, q) else { continue };
        let phase = (mul_mod(mr, a, q) as u128 + mul_mod(nr, a_inv, q) as u128) % q as u128;
        total += super::modular::e_frac(phase as u64, q);
    }
    Ok(total)
}

/// Ramanujan sum `S(m, 0; q)`, real by symmetry `a ↦ −a`.
pub fn ramanujan(m: i64, q: u64) -> Result<f64> {
    let value = kloosterman(m, 0, q)?.re;
    debug_assert!(value.abs() <= gcd(reduce(m, q), q) as f64 + 1e-6);
    Ok(value)
}

/// `Kl(x, p) = S(x, 1; p)/√p` for every `x mod p`.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    pub p: u64,
    pub values: Vec<f64>,
    /// Largest `|Im|` discarded when the transform output was made real.
    pub imag_residue: f64,
    dft: Arc<PrimeDft>,
}

impl KloostermanTable {
    pub fn get(&self, x: i64) -> f64 {
        self.values[reduce(x, self.p) as usize]
    }

    pub fn dft(&self) -> &PrimeDft {
        &self.dft
    }

    pub fn max_abs_nonzero(&self) -> f64 {
        self.values[1..].iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Bulk table from one length-`p` transform of `u ↦ e(ū/p)`:
/// `S(x, 1; p) = Σ_u e(ū/p) e(xu/p)`.
pub fn kloosterman_table(p: u64) -> Result<KloostermanTable> {
    if p < 3 {
        return Err(out_of_range("p", p, "odd primes"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let dft = Arc::new(PrimeDft::new(p)?);
    let mut h = vec![Complex64::new(0.0, 0.0); p as usize];
    for u in 1..p {
        let u_inv = inv_mod(u, p).expect("p is prime");
        h[u as usize] = super::modular::e_frac(u_inv, p);
    }
    let sums = dft.transform(&h, Direction::Inverse);
    let norm = (p as f64).sqrt();
    let imag_residue = sums.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let values = sums.iter().map(|z| z.re / norm).collect();
    Ok(KloostermanTable {
        p,
        values,
        imag_residue,
        dft,
    })
}

/// `V_p(y; a, b)` for `y = 0..p−1`. The product `Kl(ax) Kl(bx)` is not even
/// in `x`, so the values are complex in general.
#[derive(Debug, Clone)]
pub struct VpTransform {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub values: Vec<Complex64>,
}

impl VpTransform {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    /// `Σ_y |V_p(y)|²`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// `V_p(y; a, b) = p^{-1/2} Σ_x Kl(ax) Kl(bx) e(−yx/p)` with one transform.
pub fn vp_transform(table: &KloostermanTable, a: i64, b: i64) -> Result<VpTransform> {
    let p = table.p;
    let (ar, br) = (reduce(a, p), reduce(b, p));
    if ar == 0 {
        return Err(out_of_range("a", a, "non-zero residues mod p"));
    }
    if br == 0 {
        return Err(out_of_range("b", b, "non-zero residues mod p"));
    }
    let product: Vec<Complex64> = (0..p)
        .map(|x| {
            let ka = table.values[mul_mod(ar, x, p) as usize];
            let kb = table.values[mul_mod(br, x, p) as usize];
            Complex64::new(ka * kb, 0.0)
        })
        .collect();
    let norm = (p as f64).sqrt();
    let values = table
        .dft
        .transform(&product, Direction::Forward)
        .into_iter()
        .map(|z| z / norm)
        .collect();
    Ok(VpTransform {
        p,
        a: ar,
        b: br,
        values,
    })
}

/// Moment `Σ_{m mod p} |Σ_{n∈N} β_n Kl(mn, p)|^{2ν}` and its ratio to
/// `|N|^ν p + |N|^{2ν} √p`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KlMoment {
    pub moment: f64,
    pub ratio: f64,
}

pub fn kl_moment(
    table: &KloostermanTable,
    nu: u32,
    subset: &[u64],
    beta: &[f64],
) -> Result<KlMoment> {
    if nu < 1 {
        return Err(out_of_range("nu", nu, "nu >= 1"));
    }
    if subset.len() != beta.len() {
        return Err(Error::InvalidArgument(
            "subset and beta must have equal length".into(),
        ));
    }
    let p = table.p;
    if let Some(&n) = subset.iter().find(|&&n| n < 1 || n > p) {
        return Err(out_of_range("n", n, format!("[1, {p}]")));
    }
    if beta.iter().any(|b| b.abs() > 1.0) {
        return Err(Error::InvalidArgument("coefficients must satisfy |beta| <= 1".into()));
    }
    if subset.is_empty() {
        return Ok(KlMoment { moment: 0.0, ratio: 0.0 });
    }
    let moment: f64 = (0..p)
        .map(|m| {
            let inner: f64 = subset
                .iter()
                .zip(beta)
                .map(|(&n, &b)| b * table.values[mul_mod(m, n % p, p) as usize])
                .sum();
            inner.abs().powi(2 * nu as i32)
        })
        .sum();
    let size = subset.len() as f64;
    let scale = size.powi(nu as i32) * p as f64 + size.powi(2 * nu as i32) * (p as f64).sqrt();
    Ok(KlMoment {
        moment,
        ratio: moment / scale,
    })
}
