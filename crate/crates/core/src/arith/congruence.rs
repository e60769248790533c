//! The congruence count
//! `R = Σ α_{m1} β_{m2} F(n1, n2)` over `m1 n1 ≡ m2 n2 (mod q)` with all
//! four variables coprime to `q`, against its expected main term
//! `(φ(q)/q²)(Σ* α β)(∬ F)`.

use serde::Serialize;

use super::modular::{euler_phi, gcd, inv_mod, mul_mod};
use crate::error::{Error, Result};

/// A weight on `]N, 2N]²` with a known integral over the plane.
pub trait Weight2d {
    /// The scale `N`.
    fn scale(&self) -> f64;
    fn value(&self, n1: f64, n2: f64) -> f64;
    fn integral(&self) -> f64;
}

/// `∫_{-1}^{1} exp(−1/(1−u²)) du`.
pub fn bump_mass() -> f64 {
    // Trapezoid rule is spectrally accurate here: every derivative of the
    // integrand vanishes at ±1.
    let n = 4096;
    let h = 2.0 / n as f64;
    (1..n).map(|i| unit_bump(-1.0 + i as f64 * h)).sum::<f64>() * h
}

fn unit_bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

/// `w(n1) w(n2)` with `w(t) = exp(−1/(1−u²))`, `u = (2t − 3N)/N`, supported
/// in `]N, 2N[`.
#[derive(Debug, Clone, Copy)]
pub struct ProductBump {
    pub n: f64,
    mass: f64,
}

impl ProductBump {
    pub fn new(n: f64) -> Self {
        Self {
            n,
            mass: bump_mass(),
        }
    }

    pub fn profile(&self, t: f64) -> f64 {
        unit_bump((2.0 * t - 3.0 * self.n) / self.n)
    }
}

impl Weight2d for ProductBump {
    fn scale(&self) -> f64 {
        self.n
    }

    fn value(&self, n1: f64, n2: f64) -> f64 {
        self.profile(n1) * self.profile(n2)
    }

    fn integral(&self) -> f64 {
        let one = self.n / 2.0 * self.mass;
        one * one
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceCount {
    pub q: u64,
    pub m: u64,
    pub n: f64,
    pub r_exact: f64,
    pub main_term: f64,
    pub error: f64,
    pub relative_error: f64,
}

/// `alpha[i]`, `beta[i]` are the coefficients at `m = M + 1 + i`, so both
/// slices have length `M`.
pub fn congruence_count(
    q: u64,
    m: u64,
    alpha: &[f64],
    beta: &[f64],
    weight: &impl Weight2d,
) -> Result<CongruenceCount> {
    super::modular::check_modulus(q)?;
    if alpha.len() as u64 != m || beta.len() as u64 != m {
        return Err(Error::InvalidArgument(format!(
            "coefficients must be supported on ]{m}, {}]",
            2 * m
        )));
    }
    let n = weight.scale();
    if !(n >= 1.0) {
        return Err(crate::error::out_of_range("N", n, "[1, inf)"));
    }
    if (m as f64) * n <= q as f64 {
        return Err(crate::error::out_of_range("M*N", m as f64 * n, format!("> q = {q}")));
    }

    let n_lo = n.floor() as i64 + 1;
    let n_hi = (2.0 * n).floor() as i64;
    let qi = q as i64;

    // The inner double sum only depends on c = m1 m̄2 mod q.
    let mut by_ratio = vec![f64::NAN; q as usize];
    let mut inner = |c: u64| -> f64 {
        let slot = &mut by_ratio[c as usize];
        if slot.is_nan() {
            let mut total = 0.0;
            for n1 in n_lo..=n_hi {
                if gcd(n1 as u64, q) != 1 {
                    continue;
                }
                let target = mul_mod(c, n1 as u64 % q, q) as i64;
                // First n2 >= n_lo with n2 ≡ target (mod q).
                let mut n2 = n_lo + (target - n_lo).rem_euclid(qi);
                while n2 <= n_hi {
                    total += weight.value(n1 as f64, n2 as f64);
                    n2 += qi;
                }
            }
            *slot = total;
        }
        *slot
    };

    let units: Vec<(u64, f64, f64)> = (0..m)
        .map(|i| (m + 1 + i, alpha[i as usize], beta[i as usize]))
        .filter(|(v, _, _)| gcd(*v, q) == 1)
        .collect();
    let mut r_exact = 0.0;
    for &(m1, a, _) in &units {
        for &(m2, _, b) in &units {
            let c = mul_mod(m1 % q, inv_mod(m2 % q, q).expect("unit"), q);
            r_exact += a * b * inner(c);
        }
    }

    let alpha_units: f64 = units.iter().map(|u| u.1).sum();
    let beta_units: f64 = units.iter().map(|u| u.2).sum();
    let main_term = euler_phi(q) as f64 / (q as f64 * q as f64)
        * alpha_units
        * beta_units
        * weight.integral();
    let error = r_exact - main_term;
    Ok(CongruenceCount {
        q,
        m,
        n,
        r_exact,
        main_term,
        error,
        relative_error: if main_term != 0.0 {
            error.abs() / main_term.abs()
        } else {
            f64::INFINITY
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_mass_value() {
        assert!((bump_mass() - 0.443_993_816_168_079_4).abs() < 1e-13);
    }

    #[test]
    fn rejects_small_regime() {
        let w = ProductBump::new(2.0);
        assert!(congruence_count(53, 20, &[1.0; 20], &[1.0; 20], &w).is_err());
        let w = ProductBump::new(200.0);
        assert!(congruence_count(53, 20, &[1.0; 19], &[1.0; 20], &w).is_err());
    }

    #[test]
    fn modulus_one_factorizes() {
        let w = ProductBump::new(50.0);
        let alpha: Vec<f64> = (0..10).map(|i| 1.0 + i as f64 / 10.0).collect();
        let beta = vec![0.5; 10];
        let c = congruence_count(1, 10, &alpha, &beta, &w).unwrap();
        let grid: f64 = (51..=100)
            .flat_map(|a| (51..=100).map(move |b| (a, b)))
            .map(|(a, b)| w.value(a as f64, b as f64))
            .sum();
        let expected = alpha.iter().sum::<f64>() * beta.iter().sum::<f64>() * grid;
        assert!((c.r_exact - expected).abs() < 1e-9 * expected);
        // Only the lattice-sum versus integral gap remains, which decays fast in N.
        let wide = ProductBump::new(200.0);
        let c2 = congruence_count(1, 10, &alpha, &beta, &wide).unwrap();
        assert!(c.relative_error < 1e-3);
        assert!(c2.relative_error < c.relative_error);
    }
}
