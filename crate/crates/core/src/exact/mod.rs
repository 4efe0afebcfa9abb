//! Exact recoupling coefficients.
//!
//! 3j and 6j symbols are closed forms `sign · rat · √rad`; larger symbols are
//! sums of 6j products accumulated in MPFR floats.

mod ledger;
mod racah;
mod sqrt_rational;
mod symbols;

use thiserror::Error;

pub use ledger::{Exponents, FactorialLedger, Table};
pub use racah::{wigner3j, wigner3j_with, wigner6j, wigner6j_with};
pub use sqrt_rational::SqrtRational;
pub use symbols::{
    six_j_admissible, wigner15j, wigner3nj, wigner3nj_with, wigner9j, wigner9j_with, Pivot, SumTrace, Symbol3nj,
    Symbol9j,
};

/// Default working precision in significant decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// A phase exponent that must be an integer came out half-odd.
    #[error("phase parity: {0}")]
    Parity(String),
    #[error("malformed symbol: {0}")]
    Shape(String),
}

/// MPFR mantissa bits for `digits` decimal digits, plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 32
}
