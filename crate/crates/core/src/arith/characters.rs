//! Dirichlet characters modulo `q` with exact index arithmetic.
//!
//! `(Z/qZ)^*` is split into cyclic components: one per odd prime power
//! (generated by a primitive root) and up to two for the power of two
//! (`-1` and `5`). Each unit carries its discrete logs in every component.
//! A character is a vector of component exponents; its value at `n` is
//! `e(phase / L)` where `L` is the group exponent and `phase` is an exact
//! integer, so values are roots of unity with no accumulated drift.

use num_complex::Complex64;

use super::modular::{check_modulus, factorize, gcd, mul_mod, primitive_root};
use crate::error::{out_of_range, Result};

#[derive(Debug, Clone)]
struct Component {
    modulus: u64,
    order: u64,
}

#[derive(Debug, Clone)]
pub struct CharacterGroup {
    q: u64,
    components: Vec<Component>,
    exponent: u64,
    /// Component logs of each residue, `components.len()` entries per residue;
    /// `None` for non-units.
    logs: Vec<Option<Box<[u32]>>>,
    roots: Vec<Complex64>,
}

/// Index of a character inside its group; `0` is the principal character.
pub type CharIndex = usize;

impl CharacterGroup {
    /// Builds the group; tables are `O(q)` so `q` is limited to `2^26`.
    pub fn new(q: u64) -> Result<Self> {
        check_modulus(q)?;
        if q > 1 << 26 {
            return Err(out_of_range("q", q, "[1, 2^26] for character tables"));
        }
        let mut components = Vec::new();
        // Per component: log table indexed by residue mod the component modulus.
        let mut tables: Vec<Vec<u32>> = Vec::new();
        for (p, e) in factorize(q) {
            let m = p.pow(e);
            if p == 2 {
                if e == 1 {
                    continue;
                }
                let half_order = if e >= 3 { 1u64 << (e - 2) } else { 1 };
                let mut sign = vec![u32::MAX; m as usize];
                let mut five = vec![u32::MAX; m as usize];
                let mut pow5 = 1u64;
                for b in 0..half_order {
                    sign[pow5 as usize] = 0;
                    five[pow5 as usize] = b as u32;
                    let neg = (m - pow5) as usize;
                    sign[neg] = 1;
                    five[neg] = b as u32;
                    pow5 = pow5 * 5 % m;
                }
                components.push(Component { modulus: m, order: 2 });
                tables.push(sign);
                if e >= 3 {
                    components.push(Component { modulus: m, order: half_order });
                    tables.push(five);
                }
            } else {
                let g = primitive_root(p, e)?;
                let order = m / p * (p - 1);
                let mut table = vec![u32::MAX; m as usize];
                let mut x = 1u64;
                for j in 0..order {
                    table[x as usize] = j as u32;
                    x = mul_mod(x, g, m);
                }
                components.push(Component { modulus: m, order });
                tables.push(table);
            }
        }

        let exponent = components
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.order));
        let logs = (0..q)
            .map(|n| {
                (gcd(n, q) == 1).then(|| {
                    components
                        .iter()
                        .zip(&tables)
                        .map(|(c, t)| t[(n % c.modulus) as usize])
                        .collect::<Box<[u32]>>()
                })
            })
            .collect();
        let roots = (0..exponent)
            .map(|k| {
                Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / exponent as f64)
            })
            .collect();
        Ok(Self {
            q,
            components,
            exponent,
            logs,
            roots,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Number of characters, `φ(q)`.
    pub fn size(&self) -> usize {
        self.components.iter().map(|c| c.order as usize).product()
    }

    /// Least common multiple of all character orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    fn digits(&self, chi: CharIndex) -> impl Iterator<Item = u64> + '_ {
        let mut rest = chi as u64;
        self.components.iter().map(move |c| {
            let d = rest % c.order;
            rest /= c.order;
            d
        })
    }

    /// `χ(n) = e(phase / exponent)`, or `None` when `gcd(n, q) > 1`.
    pub fn phase(&self, chi: CharIndex, n: i64) -> Option<u64> {
        let r = super::modular::reduce(n, self.q);
        let logs = self.logs[r as usize].as_ref()?;
        let l = self.exponent;
        let phase = self
            .digits(chi)
            .zip(logs.iter())
            .zip(&self.components)
            .fold(0u64, |acc, ((k, &log), c)| {
                (acc + mul_mod(k * (l / c.order) % l, log as u64, l)) % l
            });
        Some(phase)
    }

    pub fn value(&self, chi: CharIndex, n: i64) -> Complex64 {
        match self.phase(chi, n) {
            Some(ph) => self.roots[ph as usize],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `χ(0), …, χ(q − 1)`.
    pub fn values(&self, chi: CharIndex) -> Vec<Complex64> {
        (0..self.q as i64).map(|n| self.value(chi, n)).collect()
    }

    pub fn is_principal(&self, chi: CharIndex) -> bool {
        chi == 0
    }

    /// Order of `χ` in the character group.
    pub fn order_of(&self, chi: CharIndex) -> u64 {
        self.digits(chi)
            .zip(&self.components)
            .fold(1u64, |acc, (k, c)| {
                num_integer::lcm(acc, c.order / gcd(k, c.order))
            })
    }

    /// Index of the complex conjugate character.
    pub fn conjugate(&self, chi: CharIndex) -> CharIndex {
        let mut idx = 0u64;
        let mut radix = 1u64;
        for (k, c) in self.digits(chi).zip(&self.components) {
            idx += ((c.order - k) % c.order) * radix;
            radix *= c.order;
        }
        idx as CharIndex
    }

    /// All characters of exact order `k`, by index.
    pub fn of_order(&self, k: u64) -> Vec<CharIndex> {
        (0..self.size()).filter(|&c| self.order_of(c) == k).collect()
    }
}
