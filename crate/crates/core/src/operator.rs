//! Linear recurrence operators `P(n, N) = sum_i c_i(n) N^i` with integer
//! polynomial coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::{Rational, UniPoly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RecurrenceOperator {
    coeffs: Vec<UniPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperatorError {
    #[error("operator has no nonzero coefficient")]
    Zero,
    #[error("sequence has {len} terms but index {needed} is required")]
    SequenceTooShort { len: usize, needed: usize },
    #[error("leading coefficient vanishes at n = {0}; cannot step forward")]
    SingularStep(i64),
}

impl RecurrenceOperator {
    /// Builds a normalized operator: trailing zero coefficients dropped, the
    /// polynomial gcd and integer content of all coefficients removed, and the
    /// leading coefficient of `c_r` made positive.
    pub fn new(coeffs: Vec<UniPoly>) -> Result<Self, OperatorError> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(OperatorError::Zero);
        }
        let mut g = UniPoly::zero();
        for c in &coeffs {
            g = g.gcd(c);
        }
        let mut coeffs: Vec<UniPoly> = coeffs
            .iter()
            .map(|c| c.div_exact(&g).expect("gcd divides every coefficient"))
            .collect();
        if coeffs.last().expect("non-empty").leading_coeff().is_negative() {
            coeffs = coeffs.iter().map(|c| -c).collect();
        }
        Ok(Self { coeffs })
    }

    /// Builds from small integer coefficient lists (degree 0 upward).
    pub fn from_i64s(coeffs: &[&[i64]]) -> Result<Self, OperatorError> {
        Self::new(coeffs.iter().map(|c| UniPoly::from_i64s(c)).collect())
    }

    /// The identity operator `1`.
    pub fn identity() -> Self {
        Self { coeffs: vec![UniPoly::one()] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    /// Largest degree in `n` among the coefficients.
    pub fn coeff_degree(&self) -> usize {
        self.coeffs.iter().filter_map(UniPoly::degree).max().unwrap_or(0)
    }

    /// `sum_i c_i(n) u(n + i)` for a sequence given from index 0.
    pub fn apply(&self, u: &[Rational], n: usize) -> Result<Rational, OperatorError> {
        let needed = n + self.order();
        if needed >= u.len() {
            return Err(OperatorError::SequenceTooShort { len: u.len(), needed });
        }
        let nn = BigInt::from(n);
        let mut acc = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = &u[n + i];
            if !v.is_zero() {
                acc += Rational::from_integer(c.eval(&nn)) * v;
            }
        }
        Ok(acc)
    }

    /// Extends `initial` (at least `order` values from index 0) to `len`
    /// terms by solving for `u(n + r)`.
    pub fn extend_forward(&self, initial: &[Rational], len: usize) -> Result<Vec<Rational>, OperatorError> {
        let r = self.order();
        if initial.len() < r {
            return Err(OperatorError::SequenceTooShort { len: initial.len(), needed: r });
        }
        let mut u = initial.to_vec();
        while u.len() < len {
            let n = u.len() - r;
            let nn = BigInt::from(n);
            let lead = self.coeffs[r].eval(&nn);
            if lead.is_zero() {
                return Err(OperatorError::SingularStep(n as i64));
            }
            let mut acc = Rational::zero();
            for i in 0..r {
                acc += Rational::from_integer(self.coeffs[i].eval(&nn)) * &u[n + i];
            }
            u.push(-acc / Rational::from_integer(lead));
        }
        Ok(u)
    }

    /// Termwise sum of two operators (not normalized; used for linearity
    /// checks).
    pub fn raw_sum(&self, other: &Self) -> Vec<UniPoly> {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                let b = other.coeffs.get(i).cloned().unwrap_or_default();
                &a + &b
            })
            .collect()
    }

    /// Unnormalized construction for callers that need exact coefficients
    /// (e.g. linearity tests). Panics on an all-zero list.
    pub fn from_raw(coeffs: Vec<UniPoly>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        assert!(!coeffs.is_empty(), "zero operator");
        Self { coeffs }
    }
}

/// The three-term operator annihilating Apery's zeta(3) sequences, shifted
/// to act on `u(n), u(n+1), u(n+2)`:
/// `(n+1)^3 - (2n+3)(17n^2+51n+39) N + (n+2)^3 N^2`.
pub fn apery_zeta3_operator() -> RecurrenceOperator {
    let c0 = UniPoly::linear(1).pow(3);
    let c1 = -&(&UniPoly::from_i64s(&[3, 2]) * &UniPoly::from_i64s(&[39, 51, 17]));
    let c2 = UniPoly::linear(2).pow(3);
    RecurrenceOperator::new(vec![c0, c1, c2]).expect("nonzero")
}

impl fmt::Display for RecurrenceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*N")?,
                _ => write!(f, "({c})*N^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RecurrenceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RecurrenceOperator({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn normalization_strips_content_and_sign() {
        let op = RecurrenceOperator::from_i64s(&[&[4], &[-2]]).unwrap();
        assert_eq!(op.coeffs(), &[UniPoly::from_i64s(&[-2]), UniPoly::one()]);
        let op = RecurrenceOperator::new(vec![
            &UniPoly::linear(1) * &UniPoly::from_i64s(&[3]),
            &UniPoly::linear(1) * &UniPoly::linear(5),
        ])
        .unwrap();
        assert_eq!(op.coeffs(), &[UniPoly::from_i64s(&[3]), UniPoly::linear(5)]);
        assert_eq!(RecurrenceOperator::new(vec![UniPoly::zero()]), Err(OperatorError::Zero));
    }

    #[test]
    fn apply_powers_of_two() {
        let op = RecurrenceOperator::from_i64s(&[&[-2], &[1]]).unwrap();
        let u: Vec<Rational> = (0..10).map(|i| Rational::from_integer(BigInt::from(1u64 << i))).collect();
        assert!(op.apply(&u, 7).unwrap().is_zero());
        assert_eq!(RecurrenceOperator::identity().apply(&u, 3).unwrap(), u[3]);
        assert!(matches!(op.apply(&u, 9), Err(OperatorError::SequenceTooShort { .. })));
    }

    #[test]
    fn apery_operator_on_known_values() {
        let a = ints(&[1, 5, 73, 1445, 33001]);
        let op = apery_zeta3_operator();
        for n in 0..3 {
            assert!(op.apply(&a, n).unwrap().is_zero());
        }
        let ext = op.extend_forward(&a[..2], 5).unwrap();
        assert_eq!(ext, a);
    }
}
