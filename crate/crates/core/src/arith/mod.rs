//! Exponential and character sums: Kloosterman and Ramanujan sums, Dirichlet
//! characters, the large sieve, incomplete sums and the congruence count.

pub mod characters;
pub mod congruence;
pub mod dft;
pub mod incomplete;
pub mod kloosterman;
pub mod large_sieve;
pub mod modular;

pub use characters::{CharIndex, CharacterGroup};
pub use congruence::{congruence_count, CongruenceCount, ProductBump, Weight2d};
pub use incomplete::{incomplete_char_sum, incomplete_kloosterman, CharSum, IncompleteKloosterman, Interval};
pub use kloosterman::{kl_moment, kloosterman, kloosterman_table, ramanujan, vp_transform, KlMoment, KloostermanTable, VpTransform};
pub use large_sieve::{large_sieve_check, large_sieve_check_with, LargeSieveCheck};

/// Largest `|V_p(y; a, b)|` allowed for `a ≠ b`. Frozen from an exhaustive
/// scan over all primes `3 ≤ p ≤ 101`, all `a ≠ b` and all `y`, whose
/// maximum was 2.1027 (at `p = 53`, `b = −a`).
pub const VP_BOUND: f64 = 2.25;

/// Ceiling for the `ν = 2` moment ratio with `|N| = 20` and random `±1`
/// coefficients. A sweep of 20 draws per prime `23 ≤ p ≤ 499` peaked at 0.1964.
pub const KL_MOMENT_NU2_BOUND: f64 = 0.25;

/// Ceiling for the relative error of the congruence count at
/// `q = 53, M = 20, N = 200`, all-ones coefficients and the product bump.
/// The brute-force value is 7.96e-4.
pub const CONGRUENCE_REL_ERROR_BOUND: f64 = 1e-3;

/// Ceiling for `|Σ e(h n̄/q)| / (|I|^{1/2} (h,q)^{1/2})` over 500 random
/// `(h, I)` at `q = 30030`. Twenty seeded scans peaked at 2.184.
pub const RSTAR_RATIO_BOUND: f64 = 3.0;

/// Ceiling for the smooth-modulus ratio of incomplete Kloosterman sums at
/// `q = 30030` against the pair `(1/6, 2/3, 1/6)`. Scans peaked at 0.816.
pub const KLOOSTERMAN_SMOOTH_RATIO_BOUND: f64 = 1.25;

/// Ceiling for `|Σ_{n∈I} χ(n)| / (q^{1/6} |I|^{1/2})` at `q = 30030`,
/// `|I| = round(q^{0.4})`. Scans over 50 random characters peaked at 0.207.
pub const CHAR_SMOOTH_RATIO_BOUND: f64 = 0.5;
