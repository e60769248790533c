//! Integer arithmetic on 64-bit moduli with 128-bit intermediates.

use crate::error::{out_of_range, Result};

/// Moduli are capped at 2^61 so that sums of two residues and all products
/// stay comfortably inside the 128-bit intermediates.
pub const MAX_MODULUS: u64 = 1 << 61;

pub fn check_modulus(q: u64) -> Result<()> {
    if q == 0 || q > MAX_MODULUS {
        return Err(out_of_range("q", q, "[1, 2^61]"));
    }
    Ok(())
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `a mod q` for signed `a`, in `[0, q)`.
pub fn reduce(a: i64, q: u64) -> u64 {
    (a as i128).rem_euclid(q as i128) as u64
}

pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    if q == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `q` by the extended Euclidean algorithm, or `None`
/// when `gcd(a, q) != 1`.
pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    if q == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = ((a % q) as i128, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(q as i128) as u64)
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut rest = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Number of divisors.
pub fn tau(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Smallest generator of `(Z/p^e Z)^*` for an odd prime `p`.
pub fn primitive_root(p: u64, e: u32) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(out_of_range("p", p, "odd primes"));
    }
    let order_factors: Vec<u64> = factorize(p - 1).into_iter().map(|(r, _)| r).collect();
    let pe = p.checked_pow(e).ok_or_else(|| out_of_range("p^e", p, "u64"))?;
    let phi = pe / p * (p - 1);
    for g in 2..p {
        let generates_mod_p = order_factors
            .iter()
            .all(|&r| pow_mod(g, (p - 1) / r, p) != 1);
        if !generates_mod_p {
            continue;
        }
        // A root mod p lifts to p^e unless g^(p-1) = 1 mod p^2, in which
        // case g + p does.
        let candidate = if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
            g + p
        } else {
            g
        };
        debug_assert_eq!(pow_mod(candidate, phi, pe), 1);
        return Ok(candidate);
    }
    unreachable!("every odd prime has a primitive root")
}

/// The additive character `e(r/q) = exp(2πi r/q)` with `r` reduced first,
/// which keeps the phase argument in `[0, 2π)`.
pub fn e_frac(r: u64, q: u64) -> num_complex::Complex64 {
    let theta = std::f64::consts::TAU * ((r % q) as f64 / q as f64);
    num_complex::Complex64::from_polar(1.0, theta)
}
