//! Binary floating point with a rigorous radius ("ball arithmetic").
//!
//! A value is `(mant ± rad) * 2^exp`; every operation rounds the midpoint to
//! `prec` bits and widens the radius enough to keep the true result inside.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BigFloatError {
    #[error("division by a ball containing zero")]
    DivisionByZero,
    #[error("square root of a ball reaching below zero")]
    NegativeSqrt,
    #[error("precision must be at least {0} bits")]
    PrecisionTooLow(u32),
}

pub const MIN_PRECISION: u32 = 16;

#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    /// Radius in units of `2^exp`.
    rad: BigUint,
    prec: u32,
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

fn shl_uint(x: &BigUint, k: i64) -> BigUint {
    debug_assert!(k >= 0);
    x << (k as usize)
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        Self { mant: BigInt::zero(), exp: 0, rad: BigUint::zero(), prec }
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Self { mant: v.into(), exp: 0, rad: BigUint::zero(), prec }.normalize()
    }

    /// Nearest-below `prec`-bit approximation of `q`, radius one ulp.
    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        if q.is_integer() {
            return Self::from_int(q.to_integer(), prec);
        }
        let num = q.numer();
        let den = q.denom();
        let exp = num.bits() as i64 - den.bits() as i64 - prec as i64 - 2;
        let scaled = if exp <= 0 { num << ((-exp) as usize) } else { num >> (exp as usize) };
        let (mant, exact) = if exp <= 0 {
            let (qq, r) = scaled.div_mod_floor(den);
            (qq, r.is_zero())
        } else {
            // exp > 0 only when |q| is huge and prec tiny; fall back exactly
            (scaled.div_floor(den), false)
        };
        let rad = match (exact, exp <= 0) {
            (true, true) => BigUint::zero(),
            (false, true) => BigUint::one(),
            // two floors: the pre-shift and the division
            (_, false) => BigUint::from(2u32),
        };
        Self { mant, exp, rad, prec }.normalize()
    }

    /// Rational midpoint plus a symmetric error bound.
    pub fn from_rational_with_error(q: &Rational, err: &Rational, prec: u32) -> Self {
        let mid = Self::from_rational(q, prec);
        mid.widen(err)
    }

    /// Adds `|err|` to the radius.
    pub fn widen(&self, err: &Rational) -> Self {
        if err.is_zero() {
            return self.clone();
        }
        // err in units of 2^exp, rounded up
        let unit = pow2_rational(self.exp);
        let e = (err.abs() / unit).ceil().to_integer();
        let mut out = self.clone();
        out.rad += e.to_biguint().expect("non-negative");
        out.normalize()
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self { prec, ..self.clone() }.normalize()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    fn normalize(mut self) -> Self {
        let bits = self.mant.bits() as i64;
        let excess = bits - self.prec as i64;
        if excess > 0 {
            let sh = excess as usize;
            let low_mask = (BigInt::one() << sh) - 1;
            let lost = !(&self.mant & &low_mask).is_zero();
            self.mant >>= sh; // floor
            self.exp += sh as i64;
            let r = &self.rad;
            let mut rad = ceil_div(r, &(BigUint::one() << sh));
            if lost {
                rad += 1u32;
            }
            self.rad = rad;
        }
        // Keep the radius from carrying more bits than needed.
        let rb = self.rad.bits() as i64;
        if rb > 64 && rb > self.mant.bits() as i64 + 8 {
            let sh = (rb - 64) as usize;
            self.mant >>= sh;
            self.exp += sh as i64;
            self.rad = (&self.rad >> sh) + 2u32;
        }
        if self.mant.is_zero() && self.rad.is_zero() {
            self.exp = 0;
        }
        self
    }

    /// Exact midpoint.
    pub fn mid(&self) -> Rational {
        Rational::from_integer(self.mant.clone()) * pow2_rational(self.exp)
    }

    /// Exact radius.
    pub fn radius(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.rad.clone())) * pow2_rational(self.exp)
    }

    /// An exact upper bound on `|x|` for every `x` in the ball.
    pub fn abs_upper_bound(&self) -> Rational {
        Rational::from_integer(self.mant.abs() + BigInt::from(self.rad.clone())) * pow2_rational(self.exp)
    }

    pub fn contains(&self, q: &Rational) -> bool {
        (q - self.mid()).abs() <= self.radius()
    }

    /// The two balls are disjoint.
    pub fn certainly_distinct(&self, other: &Self) -> bool {
        (self.mid() - other.mid()).abs() > self.radius() + other.radius()
    }

    /// Every point of the ball is strictly below `bound`.
    pub fn certainly_below(&self, bound: &Rational) -> bool {
        &(self.mid() + self.radius()) < bound
    }

    pub fn neg(&self) -> Self {
        Self { mant: -&self.mant, ..self.clone() }
    }

    pub fn abs(&self) -> Self {
        Self { mant: self.mant.abs(), ..self.clone() }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigUint, BigInt, BigUint, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let ra = shl_uint(&self.rad, self.exp - e);
        let b = &other.mant << ((other.exp - e) as usize);
        let rb = shl_uint(&other.rad, other.exp - e);
        (a, ra, b, rb, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, ra, b, rb, e) = self.aligned(other);
        Self { mant: a + b, exp: e, rad: ra + rb, prec: self.prec.max(other.prec) }.normalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ma = self.mant.magnitude();
        let mb = other.mant.magnitude();
        let rad = ma * &other.rad + mb * &self.rad + &self.rad * &other.rad;
        Self { mant: &self.mant * &other.mant, exp: self.exp + other.exp, rad, prec: self.prec.max(other.prec) }
            .normalize()
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        self.mul(&Self::from_int(k.clone(), self.prec))
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        Self { exp: self.exp + k, ..self.clone() }
    }

    pub fn div(&self, other: &Self) -> Result<Self, BigFloatError> {
        let mb = other.mant.magnitude();
        if mb <= &other.rad {
            return Err(BigFloatError::DivisionByZero);
        }
        let prec = self.prec.max(other.prec);
        let ma = self.mant.magnitude();
        let k = (prec as i64 + mb.bits() as i64 - ma.bits() as i64 + 4).max(0);
        let q = (&self.mant << (k as usize)).div_floor(&other.mant);
        let exact = other.rad.is_zero()
            && self.rad.is_zero()
            && ((&self.mant << (k as usize)).mod_floor(&other.mant)).is_zero();
        let spread = (&self.rad * mb + ma * &other.rad) << (k as usize);
        let denom = mb * (mb - &other.rad);
        let mut rad = ceil_div(&spread, &denom);
        if !exact {
            rad += 1u32;
        }
        Ok(Self { mant: q, exp: self.exp - other.exp - k, rad, prec }.normalize())
    }

    pub fn sqrt(&self) -> Result<Self, BigFloatError> {
        if self.mant.sign() == Sign::Minus || self.mant.magnitude() < &self.rad {
            return Err(BigFloatError::NegativeSqrt);
        }
        if self.mant.is_zero() {
            return Ok(Self::zero(self.prec));
        }
        // Shift so the mantissa has about 2*prec bits and the exponent is even.
        let mut k = (2 * self.prec as i64 - self.mant.bits() as i64 + 2).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = self.mant.magnitude() << (k as usize);
        let r = shl_uint(&self.rad, k);
        let root = m.sqrt();
        let mut rad = BigUint::zero();
        if &root * &root != m {
            rad += 1u32;
        }
        if !r.is_zero() {
            let lower = (&m - &r).sqrt();
            if lower.is_zero() {
                // sqrt(m + r) - sqrt(m) <= sqrt(r) when the ball touches zero
                rad += r.sqrt() + 1u32;
            } else {
                rad += ceil_div(&r, &lower);
            }
        }
        Ok(Self { mant: BigInt::from(root), exp: (self.exp - k) / 2, rad, prec: self.prec }.normalize())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `pi` from Machin's formula; the truncation and rounding errors of both
    /// arctangent series are folded into the radius.
    pub fn pi(prec: u32) -> Self {
        let guard = prec as usize + 16;
        let (a5, e5) = atan_inv_fixed(5, guard);
        let (a239, e239) = atan_inv_fixed(239, guard);
        let mant = BigInt::from(16) * a5 - BigInt::from(4) * a239;
        let rad = BigUint::from(16 * e5 + 4 * e239);
        Self { mant, exp: -(guard as i64), rad, prec }.normalize()
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let sh = (bits - 60).max(0);
        let m = (&self.mant >> (sh as usize)).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi((self.exp + sh) as i32)
    }

    /// Midpoint rendered with `digits` digits after the decimal point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mid = self.mid();
        let scale = BigInt::from(10).pow(digits as u32);
        let scaled = (mid.abs() * Rational::from_integer(scale.clone())).round().to_integer();
        let (int, frac) = scaled.div_rem(&scale);
        let sign = if mid.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            return format!("{sign}{int}");
        }
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }

    /// Radius as a short scientific string, e.g. `3.1e-70`.
    pub fn radius_sci(&self) -> String {
        sci(&self.radius())
    }

    pub fn cmp_mid(&self, other: &Self) -> Ordering {
        self.mid().cmp(&other.mid())
    }
}

/// Short scientific rendering of a non-negative rational.
pub fn sci(q: &Rational) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let f = q.numer().to_f64().unwrap_or(f64::INFINITY) / q.denom().to_f64().unwrap_or(f64::INFINITY);
    if f.is_finite() && f != 0.0 {
        return format!("{f:.3e}");
    }
    // Out of f64 range: estimate the decimal exponent from bit lengths.
    let e2 = q.numer().bits() as f64 - q.denom().bits() as f64;
    format!("~1e{}", (e2 * std::f64::consts::LOG10_2).round() as i64)
}

fn pow2_rational(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// `atan(1/x) * 2^bits` in fixed point with the number of ulps of error.
fn atan_inv_fixed(x: u64, bits: usize) -> (BigInt, u64) {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x * x);
    let mut power = &one / BigInt::from(x); // floor(2^bits / x^(2k+1))
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power = &power / &x2;
        k += 1;
    }
    // Each term is off by < 2 ulps (two floors); the alternating tail after
    // the last nonzero power is below one ulp.
    (sum, 2 * k + 2)
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2) as usize);
        write!(f, "{} ± {}", self.to_decimal(digits), self.radius_sci())
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({} ± {})", self.to_decimal(20), self.radius_sci())
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
    fn pi_digits() {
        let pi = BigFloat::pi(256);
        let s = pi.to_decimal(60);
        assert_eq!(s, "3.141592653589793238462643383279502884197169399375105820974945");
        let pi_ref: Rational = "3141592653589793238462643383279502884197169399375105820974944592307816406286209"
            .parse::<BigInt>()
            .map(|n| Rational::new(n, BigInt::from(10).pow(78)))
            .unwrap();
        assert!(pi.widen(&q(1, 1)).contains(&pi_ref));
        assert!(pi.contains(&pi_ref));
        assert!(pi.radius() < Rational::new(BigInt::one(), BigInt::one() << 240));
    }

    #[test]
    fn exact_operations_stay_exact() {
        let one = BigFloat::from_int(1, 128);
        assert!(one.sqrt().unwrap().is_exact());
        assert_eq!(one.sqrt().unwrap().mid(), q(1, 1));
        let eight = BigFloat::from_int(8, 128);
        let two = BigFloat::from_int(2, 128);
        let r = eight.div(&two).unwrap();
        assert!(r.is_exact());
        assert_eq!(r.mid(), q(4, 1));
        assert_eq!(BigFloat::from_rational(&q(3, 8), 64).mid(), q(3, 8));
    }

    #[test]
    fn division_by_zero_ball() {
        let z = BigFloat::from_rational_with_error(&q(0, 1), &q(1, 100), 64);
        assert_eq!(BigFloat::from_int(1, 64).div(&z), Err(BigFloatError::DivisionByZero));
        assert_eq!(BigFloat::from_int(-4, 64).sqrt(), Err(BigFloatError::NegativeSqrt));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(BigFloat::from_rational(&q(-1, 3), 128).to_decimal(5), "-0.33333");
        assert_eq!(BigFloat::from_rational(&q(6, 5), 128).to_decimal(3), "1.200");
    }

    /// A small random expression over rationals; `sqrt` and `pi` only
    /// appear in the non-exact variant.
    #[derive(Debug, Clone)]
    enum Op {
        Add(i64, i64),
        Mul(i64, i64),
        Div(i64, i64),
        Sqrt,
        Pi,
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            (-50i64..50, 1i64..50).prop_map(|(a, b)| Op::Add(a, b)),
            (-50i64..50, 1i64..50).prop_map(|(a, b)| Op::Mul(a, b)),
            (1i64..50, 1i64..50).prop_map(|(a, b)| Op::Div(a, b)),
            Just(Op::Sqrt),
            Just(Op::Pi),
        ]
    }

    fn run(ops: &[Op], prec: u32) -> Option<BigFloat> {
        let mut x = BigFloat::from_rational(&q(7, 3), prec);
        for o in ops {
            x = match o {
                Op::Add(a, b) => x.add(&BigFloat::from_rational(&q(*a, *b), prec)),
                Op::Mul(a, b) => x.mul(&BigFloat::from_rational(&q(*a, *b), prec)),
                Op::Div(a, b) => BigFloat::from_rational(&q(*a, *b), prec).div(&x).ok()?,
                Op::Sqrt => x.abs().sqrt().ok()?,
                Op::Pi => x.add(&BigFloat::pi(prec)),
            };
        }
        Some(x)
    }

    fn run_exact(ops: &[Op]) -> Option<Rational> {
        let mut x = q(7, 3);
        for o in ops {
            x = match o {
                Op::Add(a, b) => x + q(*a, *b),
                Op::Mul(a, b) => x * q(*a, *b),
                Op::Div(a, b) => {
                    if x.is_zero() {
                        return None;
                    }
                    q(*a, *b) / x
                }
                Op::Sqrt | Op::Pi => return None,
            };
        }
        Some(x)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn ball_contains_high_precision_recomputation(ops in prop::collection::vec(op(), 1..12)) {
            let lo = run(&ops, 80);
            let hi = run(&ops, 320);
            if let (Some(lo), Some(hi)) = (lo, hi) {
                // The high-precision ball must intersect the low one, and its
                // midpoint must sit inside the low ball widened by its radius.
                prop_assert!(!lo.certainly_distinct(&hi), "lo={lo:?} hi={hi:?}");
                prop_assert!(hi.radius() <= lo.radius() || lo.is_exact());
            }
            if let (Some(exact), Some(lo)) = (run_exact(&ops), run(&ops, 80)) {
                prop_assert!(lo.contains(&exact), "exact {exact} not in {lo:?}");
            }
        }
    }
}
