//! Exact arithmetic substrate: integers, rationals, polynomials in `n` and
//! `k`, rational functions, truncated power series and Bernoulli numbers.

mod bernoulli;
mod bipoly;
mod gcd;
mod poly;
mod ratfunc;
mod series;

use num_bigint::BigInt;
use num_traits::One;

pub use bernoulli::{bernoulli, BernoulliTable};
pub use bipoly::BiPoly;
pub use gcd::poly_gcd;
pub use poly::UniPoly;
pub use ratfunc::RatFunc;
pub use series::TruncSeries;

pub(crate) use gcd::split_content;

/// Exact rational number, always kept in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("series has zero constant term and is not invertible")]
    NonInvertible,
    #[error("pole at n = {n}, k = {k}")]
    Pole { n: String, k: String },
}

/// Row `m` of Pascal's triangle.
pub fn binomial_row(m: u32) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for i in 0..m {
        c = c * BigInt::from(m - i) / BigInt::from(i + 1);
        row.push(c.clone());
    }
    row
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}
