//! Exact arithmetic substrate: arbitrary-precision rationals, sparse
//! multivariate graded polynomials, truncated power series and the
//! elementary-symmetric basis conversion.
//!
//! Everything downstream (Chow classes, K-classes, formal group laws)
//! is a [`Poly`] over some [`VarSet`]. There is no floating point
//! anywhere in this crate.

mod monomial;
mod poly;
mod series;
mod symmetric;
mod vars;

pub use monomial::Monomial;
pub use poly::{poly_mul, Poly};
pub use series::{series_inverse, series_sqrt};
pub use symmetric::{from_elementary_symmetric, to_elementary_symmetric};
pub use vars::{VarId, VarSet};

use num::BigInt;
use num::BigRational;

/// Exact rational scalar. Always stored reduced with positive denominator
/// (guaranteed by `num`).
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient `C(n, k)` over arbitrary-precision integers.
pub fn binomial(n: u64, k: u64) -> BigInt {
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

/// Errors from the arithmetic layer.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("operands live over different variable tables")]
    VarSetMismatch,
    #[error("series operation requires constant term 1, found {0}")]
    NonUnitConstant(String),
    #[error("series inverse requires a nonzero constant term")]
    ZeroConstant,
    #[error("polynomial is not symmetric in the designated variables")]
    NotSymmetric,
    #[error("{0}")]
    Domain(String),
}
