use num_complex::Complex64;
use serde::Serialize;

use super::characters::CharacterGroup;
use super::modular::{euler_phi, gcd, reduce};
use crate::error::Result;

/// Both evaluations of `Σ_χ |Σ_n α_n χ(n)|²` and the bound `(N + q)‖α‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargeSieveCheck {
    pub q: u64,
    pub len: usize,
    /// Sum over characters.
    pub lhs: f64,
    /// `φ(q) Σ_{r coprime} |Σ_{n ≡ r} α_n|²`.
    pub lhs_congruence: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl LargeSieveCheck {
    pub fn route_gap(&self) -> f64 {
        (self.lhs - self.lhs_congruence).abs()
    }
}

/// `α` is supported on `start, start + 1, …, start + α.len() − 1`.
pub fn large_sieve_check(q: u64, start: i64, alpha: &[Complex64]) -> Result<LargeSieveCheck> {
    let group = CharacterGroup::new(q)?;
    Ok(large_sieve_check_with(&group, start, alpha))
}

pub fn large_sieve_check_with(
    group: &CharacterGroup,
    start: i64,
    alpha: &[Complex64],
) -> LargeSieveCheck {
    let q = group.modulus();
    let lhs: f64 = (0..group.size())
        .map(|chi| {
            alpha
                .iter()
                .enumerate()
                .map(|(i, &a)| a * group.value(chi, start + i as i64))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum();

    let mut classes = vec![Complex64::new(0.0, 0.0); q as usize];
    for (i, &a) in alpha.iter().enumerate() {
        classes[reduce(start + i as i64, q) as usize] += a;
    }
    let lhs_congruence = euler_phi(q) as f64
        * classes
            .iter()
            .enumerate()
            .filter(|(r, _)| gcd(*r as u64, q) == 1)
            .map(|(_, s)| s.norm_sqr())
            .sum::<f64>();

    let norm_sq: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
    let rhs = (alpha.len() as f64 + q as f64) * norm_sq;
    LargeSieveCheck {
        q,
        len: alpha.len(),
        lhs,
        lhs_congruence,
        rhs,
        pass: lhs <= rhs,
    }
}
