//! Truncated power series in `t` over the rationals.

use std::fmt;

use num_traits::{One, Zero};

use super::{AlgebraError, Rational};

/// `c_0 + c_1 t + ... + c_T t^T + O(t^(T+1))`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    /// Builds a series of truncation order `order`, padding or cutting
    /// `coeffs` as needed.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![Rational::one()], order)
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(), order)
    }

    /// `1 + a t`.
    pub fn one_plus(a: Rational, order: usize) -> Self {
        Self::new(vec![Rational::one(), a], order)
    }

    /// `sin(t) / t = sum (-1)^j t^(2j) / (2j+1)!`.
    pub fn sin_over_t(order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 1];
        let mut fact = Rational::one(); // (2j+1)!
        for j in 0..=order / 2 {
            if j > 0 {
                let a = (2 * j) as i64;
                fact = fact * Rational::from_integer((a * (a + 1)).into());
            }
            let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
            coeffs[2 * j] = sign / &fact;
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        self.check_order(other);
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.check_order(other);
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        self.check_order(other);
        let t = self.order();
        let mut coeffs = vec![Rational::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=t - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Result<TruncSeries, AlgebraError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(AlgebraError::NonInvertible);
        }
        let inv0 = c0.recip();
        let mut g: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        g.push(inv0.clone());
        for m in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for i in 1..=m {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &g[m - i];
                }
            }
            g.push(-acc * &inv0);
        }
        Ok(Self { coeffs: g })
    }

    /// `self^s` by binary powering.
    pub fn pow(&self, s: u32) -> TruncSeries {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = s;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `f(-t)`.
    pub fn reflect(&self) -> TruncSeries {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Indices of nonzero odd coefficients.
    pub fn odd_support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, c)| i % 2 == 1 && !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    fn check_order(&self, other: &TruncSeries) {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn geometric_series() {
        let f = TruncSeries::from_ints(&[1, -1], 3);
        assert_eq!(f.inv().unwrap(), TruncSeries::from_ints(&[1, 1, 1, 1], 3));
    }

    #[test]
    fn inverse_of_sinc() {
        let g = TruncSeries::sin_over_t(4).inv().unwrap();
        assert_eq!(g, TruncSeries::new(vec![q(1, 1), q(0, 1), q(1, 6), q(0, 1), q(7, 360)], 4));
    }

    #[test]
    fn inverse_of_truncated_exponential() {
        let f = TruncSeries::new(vec![q(1, 1), q(1, 1), q(1, 2)], 2);
        let g = f.inv().unwrap();
        assert_eq!(g, TruncSeries::new(vec![q(1, 1), q(-1, 1), q(1, 2)], 2));
        assert_eq!(f.mul(&g), TruncSeries::one(2));
    }

    #[test]
    fn zero_constant_term_is_rejected() {
        assert_eq!(TruncSeries::from_ints(&[0, 1], 2).inv(), Err(AlgebraError::NonInvertible));
    }

    #[test]
    fn powers() {
        assert_eq!(TruncSeries::from_ints(&[1, 1], 2).pow(2), TruncSeries::from_ints(&[1, 2, 1], 2));
        let t_over_sin = TruncSeries::sin_over_t(4).inv().unwrap();
        assert_eq!(
            t_over_sin.pow(3),
            TruncSeries::new(vec![q(1, 1), q(0, 1), q(1, 2), q(0, 1), q(17, 120)], 4)
        );
        let t_over_sin = TruncSeries::sin_over_t(2).inv().unwrap();
        assert_eq!(t_over_sin.pow(4), TruncSeries::new(vec![q(1, 1), q(0, 1), q(2, 3)], 2));
    }

    fn series(order: usize) -> impl Strategy<Value = TruncSeries> {
        prop::collection::vec((-9i64..=9, 1i64..=6), order + 1).prop_map(move |cs| {
            TruncSeries::new(cs.into_iter().map(|(a, b)| q(a, b)).collect(), order)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn inverse_times_series_is_one(f in series(6)) {
            prop_assume!(!f.coeff(0).is_zero());
            prop_assert_eq!(f.mul(&f.inv().unwrap()), TruncSeries::one(6));
        }

        #[test]
        fn pow_matches_repeated_multiplication(f in series(5), s in 0u32..=8) {
            let mut expected = TruncSeries::one(5);
            for _ in 0..s {
                expected = expected.mul(&f);
            }
            prop_assert_eq!(f.pow(s), expected);
        }
    }
}
