//! Apéry limits `lim A_j^(s)(n) / A^(s)(n) = phi_j^(s) pi^(2j)`, where
//! `phi_j^(s)` is the coefficient of `t^(2j)` in `(t / sin t)^s`, together
//! with growth-rate checks and the `zeta(3)` limit of Apéry's sequences.

mod bigfloat;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{bernoulli, Rational, TruncSeries};
use crate::franel::{apery_zeta3, coefficient_table_range, deformed, franel, FranelError, SequenceTable};

pub use bigfloat::{sci, BigFloat, BigFloatError, MIN_PRECISION};

/// `zeta(3)` to 90 decimals, from an independent high-precision evaluation.
pub const ZETA3_DIGITS: &str =
    "1.20205690315959428539973816151144999076498629234049888179227155534183820578631309018645587";

/// Rows before `n_max` kept by [`limit_report`] for convergence diagnostics.
pub const REPORT_WINDOW: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LimitError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Franel(#[from] FranelError),
    #[error(transparent)]
    Float(#[from] BigFloatError),
}

fn check_precision(prec: u32) -> Result<(), LimitError> {
    if prec < MIN_PRECISION {
        return Err(LimitError::Float(BigFloatError::PrecisionTooLow(MIN_PRECISION)));
    }
    Ok(())
}

/// `phi_0..phi_J` for one `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTable {
    pub s: u32,
    pub phis: Vec<Rational>,
}

pub fn phi(s: u32, j_max: usize) -> Result<PhiTable, LimitError> {
    if s < 1 {
        return Err(LimitError::InvalidInput("exponent s must be at least 1".into()));
    }
    let order = 2 * j_max;
    let t_over_sin = TruncSeries::sin_over_t(order).inv().expect("constant term is 1");
    let p = t_over_sin.pow(s);
    Ok(PhiTable { s, phis: (0..=j_max).map(|j| p.coeff(2 * j).clone()).collect() })
}

/// `r_j` with `[t^(2j)] pi t / sin(pi t) = r_j pi^(2j)`, via
/// `(2^(1-2j) - 1) B_(2j) (2i)^(2j) / (2j)!`.
pub fn pi_sin_zeta_coeffs(j_max: usize) -> Vec<Rational> {
    let b = bernoulli(2 * j_max);
    let mut fact = BigInt::one();
    let mut out = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        if j > 0 {
            fact *= BigInt::from(2 * j - 1) * BigInt::from(2 * j);
        }
        let two_pow = Rational::from_integer(BigInt::one() << (2 * j));
        let factor = Rational::from_integer(BigInt::from(2)) / &two_pow - Rational::one();
        let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
        out.push(factor * b.get(2 * j) * sign * two_pow / Rational::from_integer(fact.clone()));
    }
    out
}

/// `c` with `zeta(2k) = c pi^(2k)`, for `k >= 1`.
pub fn zeta_even_coeff(k: usize) -> Rational {
    let b = bernoulli(2 * k);
    let fact: BigInt = (1..=2 * k).map(BigInt::from).product();
    let sign = if k % 2 == 1 { Rational::one() } else { -Rational::one() };
    sign * b.get(2 * k) * Rational::from_integer(BigInt::one() << (2 * k)) / Rational::from_integer(2 * fact)
}

/// `c pi^(2j)` at precision.
fn pi_multiple(c: &Rational, j: usize, prec: u32) -> BigFloat {
    let pi2j = BigFloat::pi(prec + 32).pow(2 * j as u32);
    BigFloat::from_rational(c, prec + 32).mul(&pi2j).with_precision(prec)
}

/// `A_j(n) / A_0(n)` from a table row, rounded once.
pub fn limit_estimate(table: &SequenceTable, j: usize, n: usize, prec: u32) -> Result<BigFloat, LimitError> {
    check_precision(prec)?;
    let row = table
        .row(n)
        .ok_or_else(|| LimitError::InvalidInput(format!("row n = {n} not in table")))?;
    let a = row.get(j).ok_or_else(|| LimitError::InvalidInput(format!("j = {j} beyond table")))?;
    Ok(BigFloat::from_rational(&(a / &row[0]), prec))
}

/// Computes the needed row and returns `A_j(n) / A_0(n)`.
pub fn limit_estimate_at(s: u32, j: usize, n: usize, prec: u32) -> Result<BigFloat, LimitError> {
    let table = coefficient_table_range(s, n, n, j)?;
    limit_estimate(&table, j, n, prec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// `A_j / A_0 -> phi_j pi^(2j)`.
    Ratio,
    /// `A_1 / (A_1(1) A_0) -> zeta(2) / (s+1)`.
    NormalizedB,
    /// `A_2 / (A_2(1) A_0) -> 3 (5s+2) zeta(4) / ((s+1)(s+2)(s+3))`.
    NormalizedC,
}

#[derive(Debug, Clone)]
pub struct LimitReport {
    pub s: u32,
    pub j: usize,
    pub kind: LimitKind,
    pub n_used: usize,
    pub estimate: BigFloat,
    pub target: BigFloat,
    pub abs_error: BigFloat,
    /// `|e_n - e_(n-1)| / |e_(n-1) - e_(n-2)|` at `n_used`, with the
    /// differences taken exactly; `None` when a difference vanishes.
    pub successive_diff_ratio: Option<BigFloat>,
    /// `(n, |estimate_n - target|)` over the report window.
    pub error_trail: Vec<(usize, BigFloat)>,
}

impl LimitReport {
    /// Every point of the error ball is at most `tol`.
    pub fn within(&self, tol: &Rational) -> bool {
        &self.abs_error.abs_upper_bound() <= tol
    }

    /// Trail errors never increase (midpoints).
    pub fn errors_non_increasing(&self) -> bool {
        self.error_trail.windows(2).all(|w| w[1].1.mid() <= w[0].1.mid())
    }

    /// Largest ratio of consecutive trail errors, when all are nonzero.
    pub fn max_error_ratio(&self) -> Option<Rational> {
        self.error_trail
            .windows(2)
            .map(|w| {
                let prev = w[0].1.mid();
                (!prev.is_zero()).then(|| w[1].1.mid() / prev)
            })
            .collect::<Option<Vec<_>>>()
            .and_then(|v| v.into_iter().max())
    }
}

/// Compares `A_j / A_0` against `phi_j pi^(2j)` for `j = 0..=J` at
/// `n = n_max`, plus the normalized forms for `j = 1, 2`.
pub fn limit_report(s: u32, n_max: usize, j_max: usize, prec: u32) -> Result<Vec<LimitReport>, LimitError> {
    if s >= 1 && j_max > max_limit_index(s) {
        return Err(LimitError::InvalidInput(format!("J = {j_max} exceeds floor((s-1)/2) = {}", max_limit_index(s))));
    }
    limit_report_exploratory(s, n_max, j_max, prec)
}

/// [`limit_report`] without the `J <= floor((s-1)/2)` restriction.
pub fn limit_report_exploratory(
    s: u32,
    n_max: usize,
    j_max: usize,
    prec: u32,
) -> Result<Vec<LimitReport>, LimitError> {
    check_precision(prec)?;
    if s < 1 {
        return Err(LimitError::InvalidInput("exponent s must be at least 1".into()));
    }
    let n_from = n_max.saturating_sub(REPORT_WINDOW);
    let table = coefficient_table_range(s, n_from, n_max, j_max)?;
    let phis = phi(s, j_max)?;
    let base = deformed(s, 1, j_max)?;

    let mut out = Vec::new();
    for j in 0..=j_max {
        let ratios: Vec<Rational> = table.rows.iter().map(|r| &r[j] / &r[0]).collect();
        out.push(build_report(s, j, LimitKind::Ratio, n_from, &ratios, &phis.phis[j], j, prec));
        let (kind, target) = match j {
            1 => (LimitKind::NormalizedB, zeta_even_coeff(1) / Rational::from_integer((s + 1).into())),
            2 => {
                let s = i64::from(s);
                let c = Rational::new((3 * (5 * s + 2)).into(), ((s + 1) * (s + 2) * (s + 3)).into());
                (LimitKind::NormalizedC, c * zeta_even_coeff(2))
            }
            _ => continue,
        };
        let norm = base.a(j).clone();
        let scaled: Vec<Rational> = ratios.iter().map(|r| r / &norm).collect();
        out.push(build_report(s, j, kind, n_from, &scaled, &target, j, prec));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    s: u32,
    j: usize,
    kind: LimitKind,
    n_from: usize,
    ratios: &[Rational],
    target_coeff: &Rational,
    pi_power: usize,
    prec: u32,
) -> LimitReport {
    let target = pi_multiple(target_coeff, pi_power, prec);
    let error_trail: Vec<(usize, BigFloat)> = ratios
        .iter()
        .enumerate()
        .map(|(i, r)| (n_from + i, BigFloat::from_rational(r, prec).sub(&target).abs()))
        .collect();
    let last = ratios.len() - 1;
    let successive_diff_ratio = (last >= 2)
        .then(|| {
            let d1 = &ratios[last] - &ratios[last - 1];
            let d0 = &ratios[last - 1] - &ratios[last - 2];
            (!d0.is_zero()).then(|| BigFloat::from_rational(&(d1 / d0).abs(), prec))
        })
        .flatten();
    let estimate = BigFloat::from_rational(&ratios[last], prec);
    let abs_error = estimate.sub(&target).abs();
    LimitReport { s, j, kind, n_used: n_from + last, estimate, target, abs_error, successive_diff_ratio, error_trail }
}

/// `A^(s)(n) sqrt(s (pi n / 2)^(s-1)) / 2^(ns)`, which tends to 1.
pub fn asymptotic_ratio(s: u32, n: usize, prec: u32) -> Result<BigFloat, LimitError> {
    check_precision(prec)?;
    if n < 1 {
        return Err(LimitError::InvalidInput("n must be at least 1".into()));
    }
    let a = franel(s, n)?;
    let work = prec + 32;
    let half_pi_n = BigFloat::pi(work).mul_int(&BigInt::from(n)).mul_pow2(-1);
    let inside = half_pi_n.pow(s - 1).mul_int(&BigInt::from(s));
    let root = inside.sqrt()?;
    let v = root.mul_int(&a).mul_pow2(-((n as i64) * i64::from(s)));
    Ok(v.with_precision(prec))
}

/// `6 B(n) / A(n)`, which tends to `zeta(3)`.
pub fn apery_zeta3_limit(n: usize, prec: u32) -> Result<BigFloat, LimitError> {
    check_precision(prec)?;
    if n < 1 {
        return Err(LimitError::InvalidInput("n must be at least 1".into()));
    }
    let pairs = apery_zeta3(n)?;
    let p = &pairs[n];
    let q = Rational::from_integer(BigInt::from(6)) * &p.b / Rational::from_integer(p.a.clone());
    Ok(BigFloat::from_rational(&q, prec))
}

/// The stored `zeta(3)` value as a ball of radius `10^-88`.
pub fn zeta3_reference(prec: u32) -> BigFloat {
    let (int, frac) = ZETA3_DIGITS.split_once('.').expect("decimal point");
    let digits: BigInt = format!("{int}{frac}").parse().expect("digits");
    let scale = BigInt::from(10).pow(frac.len() as u32);
    let err = Rational::new(BigInt::one(), BigInt::from(10).pow(88));
    BigFloat::from_rational_with_error(&Rational::new(digits, scale), &err, prec)
}

/// Number of decimal digits `d` with `|x - y| <= 10^-d` guaranteed.
pub fn agreeing_digits(x: &BigFloat, y: &BigFloat) -> u32 {
    let bound = x.sub(y).abs_upper_bound();
    if bound.is_zero() {
        return u32::MAX;
    }
    let mut d = 0u32;
    let mut ten = Rational::one();
    loop {
        let next = &ten / Rational::from_integer(BigInt::from(10));
        if bound > next || d >= 10_000 {
            return d;
        }
        ten = next;
        d += 1;
    }
}

/// `m = floor((s-1)/2)`, the largest `j` covered by the limit theorem.
pub fn max_limit_index(s: u32) -> usize {
    (s.max(1) as usize - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn phi_closed_forms() {
        for s in 1..=10u32 {
            let t = phi(s, 3).unwrap();
            let si = i64::from(s);
            assert_eq!(t.phis[0], q(1, 1));
            assert_eq!(t.phis[1], q(si, 6));
            assert_eq!(t.phis[2], q(si * (5 * si + 2), 360));
            assert!(t.phis.iter().all(|p| p.is_positive()));
        }
        assert!(phi(0, 2).is_err());
    }

    #[test]
    fn zeta_coefficients() {
        let r = pi_sin_zeta_coeffs(3);
        assert_eq!(r, vec![q(1, 1), q(1, 6), q(7, 360), q(31, 15120)]);
        assert_eq!(pi_sin_zeta_coeffs(12), phi(1, 12).unwrap().phis);
        assert_eq!(zeta_even_coeff(1), q(1, 6));
        assert_eq!(zeta_even_coeff(2), q(1, 90));
        assert_eq!(zeta_even_coeff(3), q(1, 945));
    }

    #[test]
    fn report_scope() {
        assert!(matches!(limit_report(3, 20, 2, 128), Err(LimitError::InvalidInput(_))));
        let r = limit_report_exploratory(3, 20, 2, 128).unwrap();
        assert_eq!(r.iter().filter(|r| r.kind == LimitKind::Ratio).count(), 3);
        assert_eq!(r.iter().filter(|r| r.kind != LimitKind::Ratio).count(), 2);
    }

    #[test]
    fn trivial_estimates() {
        let e = limit_estimate_at(3, 0, 10, 128).unwrap();
        assert_eq!(e.mid(), q(1, 1));
        let t = coefficient_table_range(3, 5, 6, 1).unwrap();
        assert!(matches!(limit_estimate(&t, 1, 4, 128), Err(LimitError::InvalidInput(_))));
    }

    #[test]
    fn franel_ratio_converges_to_half_pi_squared() {
        let e = limit_estimate_at(3, 1, 120, 256).unwrap();
        let target = pi_multiple(&q(1, 2), 1, 256);
        assert!(e.sub(&target).abs_upper_bound() < q(1, 1_000_000_000));
    }

    #[test]
    fn asymptotic_ratio_examples() {
        let one = asymptotic_ratio(1, 37, 128).unwrap();
        assert!(one.is_exact());
        assert_eq!(one.mid(), q(1, 1));
        let r = asymptotic_ratio(2, 1000, 128).unwrap();
        let err = r.sub(&BigFloat::from_int(1, 128)).abs_upper_bound();
        assert!(err < q(1, 1000));
        // Stirling: binom(2n,n) sqrt(pi n) / 4^n = 1 - 1/(8n) + O(n^-2)
        let refined = r.sub(&BigFloat::from_rational(&q(7999, 8000), 128)).abs_upper_bound();
        assert!(refined < q(1, 1_000_000));
    }

    #[test]
    fn apery_limit_values() {
        let one = apery_zeta3_limit(1, 128).unwrap();
        assert_eq!(one.to_decimal(10), "1.2000000000");
        let two = apery_zeta3_limit(2, 128).unwrap();
        assert!(two.contains(&q(351, 292)));
        let z = apery_zeta3_limit(20, 256).unwrap();
        assert!(agreeing_digits(&z, &zeta3_reference(256)) >= 30);
    }

    /// Euler-Maclaurin evaluation of `zeta(3)`, independent of the stored
    /// constant: `sum_{k<N} k^-3 + N^-2/2 + N^-3/2 + sum_i B_2i (2i+1) / (2 N^(2i+2))`.
    fn zeta3_euler_maclaurin(n: i64, terms: usize) -> Rational {
        let mut acc = Rational::zero();
        for k in 1..n {
            acc += Rational::new(1.into(), BigInt::from(k).pow(3));
        }
        let nn = BigInt::from(n);
        acc += Rational::new(1.into(), 2 * nn.pow(2));
        acc += Rational::new(1.into(), 2 * nn.pow(3));
        let b = bernoulli(2 * terms);
        for i in 1..=terms {
            let c = b.get(2 * i) * Rational::from_integer(BigInt::from(2 * i + 1));
            acc += c / Rational::from_integer(2 * nn.pow(2 * i as u32 + 2));
        }
        acc
    }

    #[test]
    fn stored_zeta3_matches_euler_maclaurin() {
        let em = BigFloat::from_rational(&zeta3_euler_maclaurin(40, 30), 320);
        let stored = zeta3_reference(320);
        assert!(agreeing_digits(&em, &stored) >= 60, "{}", agreeing_digits(&em, &stored));
    }

    #[test]
    fn agreeing_digit_count() {
        let a = BigFloat::from_rational(&q(1, 3), 128);
        let b = BigFloat::from_rational(&q(333, 1000), 128);
        assert_eq!(agreeing_digits(&a, &b), 3);
    }
}
