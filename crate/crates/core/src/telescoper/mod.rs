//! Creative telescoping: operators `P(n, N)` and certificates `R(n, k)` with
//! `P a(n,k) = R(n,k+1) a(n,k+1) - R(n,k) a(n,k)`.

mod linsolve;
mod structure;
mod zeilberger;

use crate::algebra::{AlgebraError, RatFunc};
use crate::hyperterm::{operator_ratio, HyperTerm};
use crate::operator::RecurrenceOperator;

pub use linsolve::{nullspace, Elimination};
pub use structure::{analyze_structure, expected_coeff_degree, expected_order, StructureReport};

/// Rational function `R(n, k)` with `b(n, k) = R(n, k) a(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    r: RatFunc,
}

impl Certificate {
    pub fn new(r: RatFunc) -> Self {
        Self { r }
    }

    pub fn r(&self) -> &RatFunc {
        &self.r
    }

    pub fn zero() -> Self {
        Self { r: RatFunc::zero() }
    }
}

/// What happened at one trial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderAttempt {
    pub order: usize,
    /// Degree bound for the unknown polynomial; `None` when only zero fits.
    pub x_degree: Option<usize>,
    pub unknowns: usize,
    pub equations: usize,
    pub kernel_dim: usize,
    pub solvable: bool,
}

#[derive(Debug, Clone)]
pub struct Telescoped {
    pub operator: RecurrenceOperator,
    pub certificate: Certificate,
    pub attempts: Vec<OrderAttempt>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TelescopeError {
    #[error("no telescoper found; tried orders {attempted:?}")]
    NotFound { attempted: Vec<usize> },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("shift dispersion bound {0} is too large")]
    DispersionTooLarge(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Search options for [`zeilberger_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Also try order 0 (plain Gosper summability).
    pub allow_order_zero: bool,
    pub r_max: usize,
}

/// Least-order telescoper with `1 <= r <= r_max`.
pub fn zeilberger(t: &HyperTerm, r_max: usize) -> Result<Telescoped, TelescopeError> {
    zeilberger_with(t, SearchOptions { allow_order_zero: false, r_max })
}

pub fn zeilberger_with(t: &HyperTerm, opts: SearchOptions) -> Result<Telescoped, TelescopeError> {
    if opts.r_max < 1 {
        return Err(TelescopeError::InvalidInput("r_max must be at least 1".into()));
    }
    if t.rho_n().is_zero() || t.rho_k().is_zero() {
        return Err(TelescopeError::InvalidInput("degenerate term: zero shift quotient".into()));
    }
    let start = if opts.allow_order_zero { 0 } else { 1 };
    let mut attempts = Vec::new();
    for r in start..=opts.r_max {
        let sol = zeilberger::solve_order(t, r)?;
        attempts.push(sol.attempt);
        if let Some((operator, certificate)) = sol.found {
            return Ok(Telescoped { operator, certificate, attempts });
        }
    }
    Err(TelescopeError::NotFound { attempted: attempts.iter().map(|a| a.order).collect() })
}

/// Runs a single trial order and reports whether it is solvable.
pub fn try_order(t: &HyperTerm, r: usize) -> Result<(OrderAttempt, Option<(RecurrenceOperator, Certificate)>), TelescopeError> {
    let sol = zeilberger::solve_order(t, r)?;
    Ok((sol.attempt, sol.found))
}

/// `operator_ratio(P, t) - (R(n,k+1) rho_k - R(n,k))`; zero iff the
/// certificate is valid.
pub fn certificate_residual(t: &HyperTerm, p: &RecurrenceOperator, c: &Certificate) -> RatFunc {
    let lhs = operator_ratio(p, t);
    let rhs = c.r.shift(0, 1).mul(t.rho_k()).sub(&c.r);
    lhs.sub(&rhs)
}

/// Exact check of the telescoping identity.
pub fn verify_certificate(t: &HyperTerm, p: &RecurrenceOperator, c: &Certificate) -> bool {
    certificate_residual(t, p, c).is_zero()
}

/// `sum_i c_i(n) u(n+i)`.
pub fn apply_operator(
    p: &RecurrenceOperator,
    u: &[crate::algebra::Rational],
    n: usize,
) -> Result<crate::algebra::Rational, crate::operator::OperatorError> {
    p.apply(u, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Rational, UniPoly};
    use crate::hyperterm::{apery_term, binom_power_term};
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn franel_direct(s: u32, n: i64) -> Rational {
        let mut acc = BigInt::zero();
        for k in 0..=n {
            acc += crate::algebra::binomial(n, k).pow(s);
        }
        Rational::from_integer(acc)
    }

    #[test]
    fn order_one_for_powers_of_two() {
        let t = binom_power_term(1).unwrap();
        let res = zeilberger(&t, 2).unwrap();
        assert_eq!(res.operator, RecurrenceOperator::from_i64s(&[&[-2], &[1]]).unwrap());
        assert!(verify_certificate(&t, &res.operator, &res.certificate));
        let u: Vec<Rational> = (0..=21).map(|n| franel_direct(1, n)).collect();
        for n in 0..=20 {
            assert!(apply_operator(&res.operator, &u, n).unwrap().is_zero());
        }
    }

    #[test]
    fn central_binomial_recurrence() {
        let t = binom_power_term(2).unwrap();
        let res = zeilberger(&t, 2).unwrap();
        // (n+1) u(n+1) = 2(2n+1) u(n)
        let expected = RecurrenceOperator::new(vec![UniPoly::from_i64s(&[-2, -4]), UniPoly::linear(1)]).unwrap();
        assert_eq!(res.operator, expected);
        assert!(verify_certificate(&t, &res.operator, &res.certificate));
    }

    #[test]
    fn franel_order_two() {
        let t = binom_power_term(3).unwrap();
        let res = zeilberger(&t, 3).unwrap();
        assert_eq!(res.operator.order(), 2);
        assert!(!res.attempts[0].solvable);
        assert!(verify_certificate(&t, &res.operator, &res.certificate));
    }

    #[test]
    fn apery_summand_gives_apery_operator() {
        let t = apery_term();
        let res = zeilberger(&t, 2).unwrap();
        assert_eq!(res.operator, crate::operator::apery_zeta3_operator());
        assert!(verify_certificate(&t, &res.operator, &res.certificate));
    }

    #[test]
    fn identity_with_zero_certificate_fails() {
        let t = binom_power_term(2).unwrap();
        assert!(!verify_certificate(&t, &RecurrenceOperator::identity(), &Certificate::zero()));
        assert_eq!(certificate_residual(&t, &RecurrenceOperator::identity(), &Certificate::zero()), RatFunc::one());
    }

    #[test]
    fn not_found_reports_attempts() {
        let t = binom_power_term(5).unwrap();
        match zeilberger(&t, 2) {
            Err(TelescopeError::NotFound { attempted }) => assert_eq!(attempted, vec![1, 2]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(zeilberger(&t, 0), Err(TelescopeError::InvalidInput(_))));
    }

    #[test]
    fn order_zero_is_gosper_summability() {
        // a(n,k) = binom(n,k) is not Gosper-summable in k; order 0 must fail
        let t = binom_power_term(1).unwrap();
        let res = zeilberger_with(&t, SearchOptions { allow_order_zero: true, r_max: 1 }).unwrap();
        assert_eq!(res.attempts[0].order, 0);
        assert!(!res.attempts[0].solvable);
        assert_eq!(res.operator.order(), 1);
    }
}
