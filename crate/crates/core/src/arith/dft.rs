//! Prime-length discrete Fourier transforms by Rader's re-indexing.
//!
//! For prime `p` and a primitive root `g`, writing `n = g^{-a}` and
//! `k = g^b` turns the non-zero part of the length-`p` DFT into a cyclic
//! convolution of length `p − 1`, which is evaluated with `rustfft`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::modular::{inv_mod, is_prime, primitive_root};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `X[k] = Σ x[n] e(−nk/p)`.
    Forward,
    /// `X[k] = Σ x[n] e(nk/p)`, unnormalized.
    Inverse,
}

pub struct PrimeDft {
    p: usize,
    /// `g^j mod p` for `j = 0..p-1`.
    powers: Vec<usize>,
    /// `g^{-j} mod p`.
    inverse_powers: Vec<usize>,
    kernel_forward: Vec<Complex64>,
    kernel_inverse: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for PrimeDft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeDft").field("p", &self.p).finish()
    }
}

impl PrimeDft {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let g = if p == 2 { 1 } else { primitive_root(p, 1)? };
        let g_inv = inv_mod(g, p).expect("primitive root is a unit");
        let len = (p - 1) as usize;
        let mut powers = Vec::with_capacity(len);
        let mut inverse_powers = Vec::with_capacity(len);
        let (mut x, mut y) = (1u64, 1u64);
        for _ in 0..len {
            powers.push(x as usize);
            inverse_powers.push(y as usize);
            x = x * g % p;
            y = y * g_inv % p;
        }

        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let ifft = planner.plan_fft_inverse(len);
        let kernel = |sign: f64| {
            let mut k: Vec<Complex64> = powers
                .iter()
                .map(|&t| {
                    Complex64::from_polar(1.0, sign * std::f64::consts::TAU * t as f64 / p as f64)
                })
                .collect();
            fft.process(&mut k);
            k
        };
        let kernel_forward = kernel(-1.0);
        let kernel_inverse = kernel(1.0);
        Ok(Self {
            p: p as usize,
            powers,
            inverse_powers,
            kernel_forward,
            kernel_inverse,
            fft,
            ifft,
        })
    }

    pub fn len(&self) -> usize {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn transform(&self, input: &[Complex64], direction: Direction) -> Vec<Complex64> {
        assert_eq!(input.len(), self.p, "input length must equal the prime");
        let len = self.p - 1;
        let total: Complex64 = input.iter().sum();
        let mut out = vec![Complex64::new(0.0, 0.0); self.p];
        out[0] = total;
        if len == 0 {
            return out;
        }

        let mut buf: Vec<Complex64> = self.inverse_powers.iter().map(|&n| input[n]).collect();
        self.fft.process(&mut buf);
        let kernel = match direction {
            Direction::Forward => &self.kernel_forward,
            Direction::Inverse => &self.kernel_inverse,
        };
        for (b, k) in buf.iter_mut().zip(kernel) {
            *b *= k;
        }
        self.ifft.process(&mut buf);
        let scale = 1.0 / len as f64;
        for (b, &k) in buf.iter().zip(&self.powers) {
            out[k] = input[0] + b * scale;
        }
        out
    }
}

/// Direct `O(n²)` DFT of any length, used as the reference route.
pub fn naive_dft(input: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let n = input.len();
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    (0..n)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .map(|(j, &x)| {
                    let r = (j * k) % n;
                    x * Complex64::from_polar(1.0, sign * std::f64::consts::TAU * r as f64 / n as f64)
                })
                .sum()
        })
        .collect()
}
