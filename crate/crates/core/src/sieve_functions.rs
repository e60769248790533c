//! The upper and lower linear-sieve functions `F` and `f`.
//!
//! They are the continuous solutions of
//!
//! ```text
//! sF(s) = 2e^γ,  sf(s) = 0            for 0 < s ≤ 2
//! (sF(s))' = f(s − 1),  (sf(s))' = F(s − 1)   for s > 2
//! ```
//!
//! With `u = sF` and `v = sf` the right-hand sides only involve delayed
//! values, so each step is a quadrature of already-tabulated data. The grid
//! puts every integer on an even index; composite Simpson runs on index pairs
//! that never straddle an integer, where the delayed functions have their
//! derivative jumps.

use std::fmt::Write as _;

use crate::error::{out_of_range, Result};
use crate::numfmt::sig;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest accepted step.
pub const MAX_STEP: f64 = 0.01;

/// `2e^γ`.
pub fn two_exp_gamma() -> f64 {
    2.0 * EULER_GAMMA.exp()
}

#[derive(Debug, Clone)]
pub struct SieveTable {
    /// Last grid point; at least the requested `s_max`.
    pub s_max: f64,
    /// Effective step, `1/n` for the even `n` nearest above `1/requested`.
    pub step: f64,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub gamma: f64,
    per_unit: usize,
}

impl SieveTable {
    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    pub fn grid_point(&self, i: usize) -> f64 {
        2.0 + i as f64 / self.per_unit as f64
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.grid_point(i))
    }

    /// Grid points per unit length.
    pub fn per_unit(&self) -> usize {
        self.per_unit
    }

    pub fn upper_at(&self, s: f64) -> Result<f64> {
        self.lookup(s, &self.upper, |s| two_exp_gamma() / s)
    }

    pub fn lower_at(&self, s: f64) -> Result<f64> {
        self.lookup(s, &self.lower, |_| 0.0)
    }

    fn lookup(&self, s: f64, values: &[f64], closed: impl Fn(f64) -> f64) -> Result<f64> {
        if !(s > 0.0 && s <= self.s_max) {
            return Err(out_of_range("s", s, format!("(0, {}]", self.s_max)));
        }
        if s <= 2.0 {
            return Ok(closed(s));
        }
        let pos = (s - 2.0) * self.per_unit as f64;
        let i = (pos.floor() as usize).min(values.len() - 1);
        if i + 1 >= values.len() {
            return Ok(values[values.len() - 1]);
        }
        let t = pos - i as f64;
        Ok(values[i] * (1.0 - t) + values[i + 1] * t)
    }

    /// CSV with header `s,F,f`, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,F,f\n");
        for (i, s) in self.grid().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                sig(s, 12),
                sig(self.upper[i], 12),
                sig(self.lower[i], 12)
            );
        }
        out
    }
}

/// Tabulates `F` and `f` on `[2, s_max]`.
pub fn solve(s_max: f64, step: f64) -> Result<SieveTable> {
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(out_of_range("step", step, format!("(0, {MAX_STEP}]")));
    }
    if !(s_max.is_finite() && s_max >= 2.0) {
        return Err(out_of_range("s_max", s_max, "[2, inf)"));
    }
    let mut per_unit = (1.0 / step - 1e-9).ceil() as usize;
    if per_unit % 2 == 1 {
        per_unit += 1;
    }
    let h = 1.0 / per_unit as f64;
    let mut intervals = ((s_max - 2.0) * per_unit as f64 - 1e-9).ceil().max(0.0) as usize;
    if intervals % 2 == 1 {
        intervals += 1;
    }
    let points = intervals + 1;
    let c = two_exp_gamma();
    let s_at = |i: usize| 2.0 + i as f64 * h;

    let mut u = vec![0.0; points];
    let mut v = vec![0.0; points];
    let mut upper = vec![0.0; points];
    let mut lower = vec![0.0; points];
    u[0] = c;
    v[0] = 0.0;
    upper[0] = c / 2.0;
    lower[0] = 0.0;

    // Delayed integrands at grid point j: (f(s_j - 1), F(s_j - 1)).
    let delayed = |j: usize, upper: &[f64], lower: &[f64]| -> (f64, f64) {
        if j >= per_unit {
            (lower[j - per_unit], upper[j - per_unit])
        } else {
            let t = s_at(j) - 1.0;
            (0.0, c / t)
        }
    };

    let mut i = 0;
    while i + 2 <= intervals {
        let (du0, dv0) = delayed(i, &upper, &lower);
        let (du1, dv1) = delayed(i + 1, &upper, &lower);
        let (du2, dv2) = delayed(i + 2, &upper, &lower);
        u[i + 1] = u[i] + h * (5.0 * du0 + 8.0 * du1 - du2) / 12.0;
        v[i + 1] = v[i] + h * (5.0 * dv0 + 8.0 * dv1 - dv2) / 12.0;
        u[i + 2] = u[i] + h * (du0 + 4.0 * du1 + du2) / 3.0;
        v[i + 2] = v[i] + h * (dv0 + 4.0 * dv1 + dv2) / 3.0;
        for k in [i + 1, i + 2] {
            let s = s_at(k);
            upper[k] = u[k] / s;
            lower[k] = v[k] / s;
        }
        i += 2;
    }

    Ok(SieveTable {
        s_max: s_at(intervals),
        step: h,
        upper,
        lower,
        gamma: EULER_GAMMA,
        per_unit,
    })
}
