//! Rational functions in `n` and `k` kept in lowest terms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::gcd::div_exact_or_panic;
use super::{poly_gcd, AlgebraError, BiPoly, Rational};

/// A quotient `num / den` of integer polynomials.
///
/// Always normalized: numerator and denominator share no polynomial factor
/// and no integer content, and the denominator has a positive leading
/// coefficient under graded-lex order with `n > k`. Equality is therefore
/// structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: BiPoly,
    den: BiPoly,
}

impl RatFunc {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den)?;
        let num = div_exact_or_panic(&num, &g);
        let den = div_exact_or_panic(&den, &g);
        Ok(Self::from_coprime(num, den))
    }

    /// Builds from a numerator and denominator already known to be coprime
    /// as polynomials; only integer content and sign are fixed up.
    fn from_coprime(num: BiPoly, den: BiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut c = num.integer_content().gcd(&den.integer_content());
        if den.leading_sign() < 0 {
            c = -c;
        }
        if c.is_one() {
            return Self { num, den };
        }
        Self { num: num.div_scalar_exact(&c), den: den.div_scalar_exact(&c) }
    }

    pub fn zero() -> Self {
        Self { num: BiPoly::zero(), den: BiPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(BiPoly::one())
    }

    pub fn from_poly(p: BiPoly) -> Self {
        Self { num: p, den: BiPoly::one() }
    }

    pub fn from_integer(c: i64) -> Self {
        Self::from_poly(BiPoly::constant(BigInt::from(c)))
    }

    pub fn num(&self) -> &BiPoly {
        &self.num
    }

    pub fn den(&self) -> &BiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Re-runs normalization; a no-op on values built through this API.
    pub fn normalize(&self) -> Self {
        Self::new(self.num.clone(), self.den.clone()).expect("denominator is nonzero")
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Henrici: with g = gcd(b, d), only g can share factors with the new
        // numerator.
        let g = poly_gcd(&self.den, &other.den).expect("denominators are nonzero");
        let b_g = div_exact_or_panic(&self.den, &g);
        let d_g = div_exact_or_panic(&other.den, &g);
        let num = &(&self.num * &d_g) + &(&other.num * &b_g);
        if num.is_zero() {
            return Self::zero();
        }
        let den = &b_g * &other.den;
        if g.is_one() {
            return Self::from_coprime(num, den);
        }
        let h = poly_gcd(&num, &g).expect("nonzero");
        Self::from_coprime(div_exact_or_panic(&num, &h), div_exact_or_panic(&den, &h))
    }

    pub fn neg(&self) -> RatFunc {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = poly_gcd(&self.num, &other.den).expect("nonzero");
        let g2 = poly_gcd(&other.num, &self.den).expect("nonzero");
        let num = &div_exact_or_panic(&self.num, &g1) * &div_exact_or_panic(&other.num, &g2);
        let den = &div_exact_or_panic(&self.den, &g2) * &div_exact_or_panic(&other.den, &g1);
        Self::from_coprime(num, den)
    }

    pub fn mul_poly(&self, p: &BiPoly) -> RatFunc {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn inv(&self) -> Result<RatFunc, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, AlgebraError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        // Powers of coprime polynomials stay coprime.
        Self::from_coprime(self.num.pow(e), self.den.pow(e))
    }

    /// Substitutes `n -> n + a`, `k -> k + b`.
    pub fn shift(&self, a: i64, b: i64) -> RatFunc {
        Self::from_coprime(self.num.shift(a, b), self.den.shift(a, b))
    }

    pub fn eval(&self, n: &Rational, k: &Rational) -> Result<Rational, AlgebraError> {
        let d = self.den.eval(n, k);
        if d.is_zero() {
            return Err(AlgebraError::Pole { n: n.to_string(), k: k.to_string() });
        }
        Ok(self.num.eval(n, k) / d)
    }

    pub fn eval_int(&self, n: i64, k: i64) -> Result<Rational, AlgebraError> {
        self.eval(&Rational::from_integer(n.into()), &Rational::from_integer(k.into()))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lin(a: i64, b: i64, c: i64) -> BiPoly {
        BiPoly::linear(a, b, c)
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let num = &lin(1, 1, 0) * &lin(1, -1, 0);
        let r = RatFunc::new(num.scale(&BigInt::from(6)), lin(-2, 2, 0).scale(&BigInt::from(2))).unwrap();
        // 6(n+k)(n-k) / (-4(n-k)) = -3(n+k)/2
        assert_eq!(r.num(), &lin(-3, -3, 0));
        assert_eq!(r.den(), &BiPoly::constant(BigInt::from(2)));
    }

    #[test]
    fn sum_and_difference() {
        let a = RatFunc::new(BiPoly::one(), lin(1, -1, 1)).unwrap();
        let b = RatFunc::new(BiPoly::one(), lin(1, -1, 2)).unwrap();
        let s = a.sub(&b);
        let expected = RatFunc::new(BiPoly::one(), &lin(1, -1, 1) * &lin(1, -1, 2)).unwrap();
        assert_eq!(s, expected);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn pole_is_reported() {
        let a = RatFunc::new(BiPoly::one(), lin(1, -1, 0)).unwrap();
        assert!(matches!(a.eval_int(3, 3), Err(AlgebraError::Pole { .. })));
        assert_eq!(a.eval_int(5, 3).unwrap(), Rational::new(1.into(), 2.into()));
    }

    fn small_poly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec((-5i64..=5, 0u32..=2, 0u32..=2), 1..5)
            .prop_map(|ts| BiPoly::from_terms(ts.into_iter().map(|(c, i, j)| (BigInt::from(c), i, j))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn normalization_is_idempotent(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            let r = RatFunc::new(&a * &c, &b * &c).unwrap();
            let again = r.normalize();
            prop_assert_eq!(again.num(), r.num());
            prop_assert_eq!(again.den(), r.den());
        }

        #[test]
        fn arithmetic_agrees_with_evaluation(a in small_poly(), b in small_poly(), c in small_poly(), d in small_poly(),
                                             n in -6i64..6, k in -6i64..6) {
            prop_assume!(!b.is_zero() && !d.is_zero());
            let x = RatFunc::new(a, b).unwrap();
            let y = RatFunc::new(c, d).unwrap();
            if let (Ok(xv), Ok(yv)) = (x.eval_int(n, k), y.eval_int(n, k)) {
                if let Ok(s) = x.add(&y).eval_int(n, k) {
                    prop_assert_eq!(s, &xv + &yv);
                }
                if let Ok(p) = x.mul(&y).eval_int(n, k) {
                    prop_assert_eq!(p, &xv * &yv);
                }
            }
        }
    }
}
