//! Numerical workbench for Brun–Titchmarsh constants: exponent pairs,
//! linear sieve functions, Kloosterman and character sums, the constant
//! curves and prime counts in progressions.

pub mod arith;
pub mod bt_constants;
pub mod cli;
pub mod error;
pub mod exponent_pairs;
pub mod numfmt;
pub mod prime_counts;
pub mod rational;
pub mod sieve_functions;

pub use error::{Error, Result};
pub use rational::Rational;
