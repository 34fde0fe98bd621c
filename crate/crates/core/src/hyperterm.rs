//! Bivariate hypergeometric terms given by their shift quotients.
//!
//! A term `a(n, k)` is carried as `rho_n = a(n+1,k)/a(n,k)` and
//! `rho_k = a(n,k+1)/a(n,k)`. All supported terms vanish outside
//! `0 <= k <= n` and are normalized by `a(0, 0) = 1`.

use num_traits::{One, Zero};

use crate::algebra::{binomial, AlgebraError, BiPoly, RatFunc, Rational};
use crate::operator::RecurrenceOperator;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    BinomPower(u32),
    Apery,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperTerm {
    rho_n: RatFunc,
    rho_k: RatFunc,
    label: String,
    kind: Kind,
}

impl HyperTerm {
    /// A user-supplied term. Fails if either quotient is zero or the
    /// mixed-shift compatibility condition does not hold.
    pub fn new(rho_n: RatFunc, rho_k: RatFunc, label: impl Into<String>) -> Result<Self, AlgebraError> {
        let t = Self { rho_n, rho_k, label: label.into(), kind: Kind::General };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        if self.rho_n.is_zero() || self.rho_k.is_zero() {
            return Err(AlgebraError::InvalidInput("degenerate term: zero shift quotient".into()));
        }
        if !self.is_compatible() {
            return Err(AlgebraError::InvalidInput("shift quotients are not compatible".into()));
        }
        Ok(())
    }

    pub fn rho_n(&self) -> &RatFunc {
        &self.rho_n
    }

    pub fn rho_k(&self) -> &RatFunc {
        &self.rho_k
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The exponent `s` when this is `binom(n, k)^s`.
    pub fn binom_power(&self) -> Option<u32> {
        match self.kind {
            Kind::BinomPower(s) => Some(s),
            _ => None,
        }
    }

    /// `rho_n(n, k+1) rho_k(n, k) == rho_k(n+1, k) rho_n(n, k)`.
    pub fn is_compatible(&self) -> bool {
        let lhs = self.rho_n.shift(0, 1).mul(&self.rho_k);
        let rhs = self.rho_k.shift(1, 0).mul(&self.rho_n);
        lhs == rhs
    }

    /// Exact value of `a(n, k)`.
    pub fn eval(&self, n: i64, k: i64) -> Result<Rational, AlgebraError> {
        if n < 0 || k < 0 || k > n {
            return Ok(Rational::zero());
        }
        match self.kind {
            Kind::BinomPower(s) => Ok(Rational::from_integer(binomial(n, k).pow(s))),
            Kind::Apery => {
                let v = binomial(n, k) * binomial(n + k, k);
                Ok(Rational::from_integer(&v * &v))
            }
            Kind::General => self.eval_by_quotients(n, k),
        }
    }

    /// Walks `(0,0) -> (n,0) -> (n,k)` multiplying shift quotients.
    pub fn eval_by_quotients(&self, n: i64, k: i64) -> Result<Rational, AlgebraError> {
        if n < 0 || k < 0 || k > n {
            return Ok(Rational::zero());
        }
        let mut v = Rational::one();
        for i in 0..n {
            v *= self.rho_n.eval_int(i, 0)?;
        }
        for j in 0..k {
            v *= self.rho_k.eval_int(n, j)?;
        }
        Ok(v)
    }
}

/// `a(n, k) = binom(n, k)^s`.
pub fn binom_power_term(s: u32) -> Result<HyperTerm, AlgebraError> {
    if s < 1 {
        return Err(AlgebraError::InvalidInput("exponent s must be at least 1".into()));
    }
    let rho_k = RatFunc::new(BiPoly::linear(1, -1, 0), BiPoly::linear(0, 1, 1))?.pow(s);
    let rho_n = RatFunc::new(BiPoly::linear(1, 0, 1), BiPoly::linear(1, -1, 1))?.pow(s);
    Ok(HyperTerm { rho_n, rho_k, label: format!("binom(n,k)^{s}"), kind: Kind::BinomPower(s) })
}

/// `a(n, k) = binom(n, k)^2 binom(n+k, k)^2`, the summand of Apery's zeta(3)
/// sequence.
pub fn apery_term() -> HyperTerm {
    let rho_k = RatFunc::new(
        &BiPoly::linear(1, -1, 0).pow(2) * &BiPoly::linear(1, 1, 1).pow(2),
        BiPoly::linear(0, 1, 1).pow(4),
    )
    .expect("nonzero denominator");
    let rho_n = RatFunc::new(BiPoly::linear(1, 1, 1).pow(2), BiPoly::linear(1, -1, 1).pow(2))
        .expect("nonzero denominator");
    HyperTerm { rho_n, rho_k, label: "binom(n,k)^2 binom(n+k,k)^2".into(), kind: Kind::Apery }
}

/// `sigma_i(n,k) = a(n+i,k)/a(n,k)` for `i = 0..=r`.
pub fn shift_quotients(term: &HyperTerm, r: usize) -> Vec<RatFunc> {
    let mut out = Vec::with_capacity(r + 1);
    out.push(RatFunc::one());
    for i in 0..r {
        let next = out[i].mul(&term.rho_n.shift(i as i64, 0));
        out.push(next);
    }
    out
}

/// `sum_i c_i(n) a(n+i,k)/a(n,k)` as a normalized rational function.
pub fn operator_ratio(op: &RecurrenceOperator, term: &HyperTerm) -> RatFunc {
    let sigmas = shift_quotients(term, op.order());
    let mut acc = RatFunc::zero();
    for (c, sigma) in op.coeffs().iter().zip(&sigmas) {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&sigma.mul_poly(&BiPoly::from_n_poly(c)));
    }
    acc
}

/// Evaluates `binom(n,k)^s` along an arbitrary monotone staircase path from
/// the origin, using the quotients only. `steps` lists `true` for an
/// `n`-step and `false` for a `k`-step.
pub fn eval_along_path(term: &HyperTerm, steps: &[bool]) -> Result<Rational, AlgebraError> {
    let (mut n, mut k) = (0i64, 0i64);
    let mut v = Rational::one();
    for &step_n in steps {
        if step_n {
            v *= term.rho_n.eval_int(n, k)?;
            n += 1;
        } else {
            v *= term.rho_k.eval_int(n, k)?;
            k += 1;
        }
    }
    Ok(v)
}
