//! Exact arithmetic: rationals, polynomials and rational functions in the
//! level `k`, and dense linear algebra over Q(k).

mod matrix;
mod poly;
mod ratk;

pub use matrix::{MatK, Solution};
pub use poly::PolyK;
pub use ratk::RatK;

use num_bigint::BigInt;
use thiserror::Error;

/// Arbitrary precision rational.
pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at a pole (k = {at})")]
    Pole { at: String },
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}

pub fn rat(p: i64, q: i64) -> BigRat {
    BigRat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p` or `p/q`, optionally signed.
pub fn parse_bigrat(s: &str) -> Result<BigRat, FieldError> {
    let s = s.trim();
    let err = || FieldError::Parse(s.to_string());
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| err())?;
    let q: BigInt = q.parse().map_err(|_| err())?;
    if q == BigInt::from(0) {
        return Err(FieldError::DivisionByZero);
    }
    Ok(BigRat::new(p, q))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |a, b| a * BigInt::from(b))
}
