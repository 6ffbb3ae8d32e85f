//! Exact arithmetic: rationals, sparse multivariate polynomials, fractions
//! over propagator atoms, truncated power series and prime-field helpers.

mod fraction;
pub mod modular;
mod parse;
mod poly;
mod series;
mod symbol;

pub use fraction::ExactFraction;
pub use poly::{Bindings, Monomial, MultiPoly};
pub use series::Series;
pub use symbol::Symbol;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid symbol name `{0}`")]
    InvalidSymbol(String),
    #[error("no value bound for symbol `{0}`")]
    MissingBinding(Symbol),
    #[error("denominator atom `{0}` vanishes at the evaluation point")]
    DenominatorVanishes(String),
    #[error("the zero polynomial cannot be a denominator atom")]
    ZeroAtom,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// `n` as an exact rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)` for non-negative integers.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
