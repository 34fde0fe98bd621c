//! Generalized Franel numbers `A^(s)(n) = sum_k binom(n,k)^s`, their
//! deformations
//!
//! ```text
//! A^(s)(n, t) = sum_k binom(n,k)^s [ prod_{j<=k} (1 - t/j) prod_{j<=n-k} (1 + t/j) ]^(-s)
//! ```
//!
//! with even Taylor coefficients `A_j^(s)(n)`, and Apéry's `zeta(3)`
//! sequences.
//!
//! The deformed sums are computed in the scaled variable `tau = t / L` with
//! `L = lcm(1, ..., n)`, where every bracket factor `1 +- (L/j) tau` has
//! integer coefficients, so the whole per-row computation stays in `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{binomial, Rational, TruncSeries};
use crate::operator::{apery_zeta3_operator, OperatorError, RecurrenceOperator};
use crate::telescoper::StructureReport;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FranelError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("summation and recursion disagree for A({0})")]
    Inconsistent(usize),
}

fn check_s(s: u32) -> Result<(), FranelError> {
    if s < 1 {
        return Err(FranelError::InvalidInput("exponent s must be at least 1".into()));
    }
    Ok(())
}

/// `sum_{k=0}^n binom(n,k)^s`.
pub fn franel(s: u32, n: usize) -> Result<BigInt, FranelError> {
    check_s(s)?;
    let mut acc = BigInt::zero();
    let mut c = BigInt::one();
    for k in 0..=n {
        acc += c.pow(s);
        c = c * (n - k) / (k + 1);
    }
    Ok(acc)
}

/// `lcm(1, ..., n)`, with `lcm() = 1`.
pub fn lcm_upto(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc.lcm(&BigInt::from(j)))
}

/// `A^(s)(n, t)` truncated after `t^(2J+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformedSeries {
    pub s: u32,
    pub n: usize,
    pub series: TruncSeries,
}

impl DeformedSeries {
    /// `A_j^(s)(n)`, the coefficient of `t^(2j)`.
    pub fn a(&self, j: usize) -> &Rational {
        self.series.coeff(2 * j)
    }

    pub fn odd_coefficients_vanish(&self) -> bool {
        self.series.odd_support().is_empty()
    }
}

pub fn deformed(s: u32, n: usize, j_max: usize) -> Result<DeformedSeries, FranelError> {
    check_s(s)?;
    let order = 2 * j_max + 1;
    let (scaled, l) = scaled_sum(s, n, order);
    Ok(DeformedSeries { s, n, series: TruncSeries::new(unscale(&scaled, &l), order) })
}

/// Exact `A_j^(s)(n)` for `j = 0..=J`, one row per `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable {
    pub s: u32,
    pub j_max: usize,
    pub n_start: usize,
    pub rows: Vec<Vec<Rational>>,
}

impl SequenceTable {
    pub fn n_end(&self) -> usize {
        self.n_start + self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Option<&[Rational]> {
        n.checked_sub(self.n_start).and_then(|i| self.rows.get(i)).map(Vec::as_slice)
    }

    pub fn get(&self, n: usize, j: usize) -> Option<&Rational> {
        self.row(n).and_then(|r| r.get(j))
    }

    /// The column `A_j(n_start), A_j(n_start+1), ...`.
    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }
}

pub fn coefficient_table(s: u32, n_max: usize, j_max: usize) -> Result<SequenceTable, FranelError> {
    coefficient_table_range(s, 0, n_max, j_max)
}

/// Rows `n_from..=n_to` only; rows are independent, so windows far out are
/// as cheap as their own rows.
pub fn coefficient_table_range(s: u32, n_from: usize, n_to: usize, j_max: usize) -> Result<SequenceTable, FranelError> {
    check_s(s)?;
    if n_to < n_from {
        return Err(FranelError::InvalidInput(format!("empty range {n_from}..={n_to}")));
    }
    let rows = (n_from..=n_to).into_par_iter().map(|n| coefficient_row(s, n, j_max)).collect();
    Ok(SequenceTable { s, j_max, n_start: n_from, rows })
}

fn coefficient_row(s: u32, n: usize, j_max: usize) -> Vec<Rational> {
    let order = 2 * j_max + 1;
    let (scaled, l) = scaled_sum(s, n, order);
    let full = unscale(&scaled, &l);
    (0..=j_max).map(|j| full[2 * j].clone()).collect()
}

fn unscale(scaled: &[BigInt], l: &BigInt) -> Vec<Rational> {
    let mut pow = BigInt::one();
    scaled
        .iter()
        .map(|c| {
            let v = Rational::new(c.clone(), pow.clone());
            pow *= l;
            v
        })
        .collect()
}

/// `f <- f * (1 + c tau)`, truncated.
fn mul_linear(f: &mut [BigInt], c: &BigInt) {
    for i in (1..f.len()).rev() {
        let t = &f[i - 1] * c;
        f[i] += t;
    }
}

/// `f <- f / (1 + c tau)`, truncated; exact over `Z`.
fn div_linear(f: &mut [BigInt], c: &BigInt) {
    for i in 1..f.len() {
        let t = &f[i - 1] * c;
        f[i] -= t;
    }
}

/// Inverse of an integer series with constant term 1.
fn inv_unit(f: &[BigInt]) -> Vec<BigInt> {
    let mut g = vec![BigInt::zero(); f.len()];
    g[0] = BigInt::one();
    for i in 1..f.len() {
        let mut acc = BigInt::zero();
        for j in 1..=i {
            if !f[j].is_zero() {
                acc += &f[j] * &g[i - j];
            }
        }
        g[i] = -acc;
    }
    g
}

fn mul_trunc(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let len = a.len();
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().take(len - i).enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pow_trunc(f: &[BigInt], mut e: u32) -> Vec<BigInt> {
    let mut base = f.to_vec();
    let mut acc = vec![BigInt::zero(); f.len()];
    acc[0] = BigInt::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_trunc(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_trunc(&base, &base);
        }
    }
    acc
}

/// Visits the scaled per-`k` terms `binom(n,k)^s bracket_k(tau)^(-s)` for
/// `k = 0..=n`, updating the bracket incrementally. Returns `L`.
fn for_each_scaled_term(s: u32, n: usize, order: usize, mut visit: impl FnMut(usize, Vec<BigInt>)) -> BigInt {
    let l = lcm_upto(n);
    let mut bracket = vec![BigInt::zero(); order + 1];
    bracket[0] = BigInt::one();
    for j in 1..=n {
        mul_linear(&mut bracket, &(&l / j));
    }
    let mut binom = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            // k-1 -> k: gain (1 - t/k), lose (1 + t/(n-k+1))
            mul_linear(&mut bracket, &-(&l / k));
            div_linear(&mut bracket, &(&l / (n - k + 1)));
        }
        let weight = binom.pow(s);
        let term: Vec<BigInt> = pow_trunc(&inv_unit(&bracket), s).into_iter().map(|c| c * &weight).collect();
        visit(k, term);
        binom = binom * (n - k) / (k + 1);
    }
    l
}

/// Scaled coefficients `C_i` with `A^(s)(n,t) = sum_i C_i (t/L)^i`.
fn scaled_sum(s: u32, n: usize, order: usize) -> (Vec<BigInt>, BigInt) {
    let mut total = vec![BigInt::zero(); order + 1];
    let l = for_each_scaled_term(s, n, order, |_, term| {
        for (acc, c) in total.iter_mut().zip(term) {
            *acc += c;
        }
    });
    (total, l)
}

/// The `k`-th summand of `A^(s)(n,t)` expanded from scratch in rational
/// arithmetic (no incremental update, no scaling).
pub fn summand_series(s: u32, n: usize, k: usize, order: usize) -> TruncSeries {
    let mut bracket = TruncSeries::one(order);
    for j in 1..=k {
        bracket = bracket.mul(&TruncSeries::one_plus(-Rational::new(1.into(), j.into()), order));
    }
    for j in 1..=n - k {
        bracket = bracket.mul(&TruncSeries::one_plus(Rational::new(1.into(), j.into()), order));
    }
    let weight = Rational::from_integer(binomial(n as i64, k as i64).pow(s));
    bracket.inv().expect("constant term is 1").pow(s).scale(&weight)
}

/// All summands of `A^(s)(n,t)` through the incremental path, unscaled.
pub fn summands_incremental(s: u32, n: usize, order: usize) -> Vec<TruncSeries> {
    let mut scaled = Vec::with_capacity(n + 1);
    let l = for_each_scaled_term(s, n, order, |_, term| scaled.push(term));
    scaled.iter().map(|t| TruncSeries::new(unscale(t, &l), order)).collect()
}

/// One nonzero residue found by [`annihilation_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub j: usize,
    pub n: usize,
    pub residue: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilationReport {
    pub s: u32,
    pub j_max: usize,
    pub n_from: usize,
    pub n_to: usize,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl AnnihilationReport {
    pub fn all_zero(&self) -> bool {
        self.violations.is_empty()
    }

    /// Smallest `n` from which every checked residue for `j` vanishes.
    pub fn first_clean_n(&self, j: usize) -> usize {
        self.violations.iter().filter(|v| v.j == j).map(|v| v.n + 1).max().unwrap_or(self.n_from)
    }
}

/// Checks `sum_i c_i(n) A_j(n+i) = 0` for `j <= j_max` and
/// `n_from <= n <= n_to`. Nonzero residues are returned as data.
pub fn annihilation_check(
    s: u32,
    p: &RecurrenceOperator,
    j_max: usize,
    n_from: usize,
    n_to: usize,
) -> Result<AnnihilationReport, FranelError> {
    let table = coefficient_table_range(s, n_from, n_to + p.order(), j_max)?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for j in 0..=j_max {
        let col = table.column(j);
        for n in n_from..=n_to {
            // Shift so the operator sees the column as starting at index 0.
            let local = &col[n - n_from..];
            let residue = apply_at(p, local, n);
            checked += 1;
            if !residue.is_zero() {
                violations.push(Violation { j, n, residue });
            }
        }
    }
    Ok(AnnihilationReport { s, j_max, n_from, n_to, checked, violations })
}

/// `sum_i c_i(n) u[i]`.
fn apply_at(p: &RecurrenceOperator, u: &[Rational], n: usize) -> Rational {
    let nn = BigInt::from(n);
    p.coeffs()
        .iter()
        .zip(u)
        .map(|(c, v)| Rational::from_integer(c.eval(&nn)) * v)
        .fold(Rational::zero(), |a, b| a + b)
}

/// First index from which annihilation is guaranteed: 0 without integer
/// roots of the certificate denominator in `n`, else one past the largest.
pub fn default_n_from(report: &StructureReport) -> usize {
    report.integer_roots_of_denominator_in_n.iter().max().map_or(0, |&r| r as usize + 1)
}

/// `(n, A(n), B(n))` of Apéry's `zeta(3)` construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperyPair {
    pub n: usize,
    pub a: BigInt,
    pub b: Rational,
}

/// `sum_k binom(n,k)^2 binom(n+k,k)^2`.
pub fn apery_a_direct(n: usize) -> BigInt {
    let n = n as i64;
    (0..=n)
        .map(|k| {
            let v = binomial(n, k) * binomial(n + k, k);
            &v * &v
        })
        .sum()
}

/// `A(n)` and `B(n)` for `n = 0..=n_max`, from the three-term recurrence,
/// with `A` cross-checked against direct summation.
pub fn apery_zeta3(n_max: usize) -> Result<Vec<AperyPair>, FranelError> {
    if n_max < 1 {
        return Err(FranelError::InvalidInput("n_max must be at least 1".into()));
    }
    let op = apery_zeta3_operator();
    let int = |v: i64| Rational::from_integer(v.into());
    let a = op.extend_forward(&[int(1), int(5)], n_max + 1)?;
    let b = op.extend_forward(&[int(0), int(1)], n_max + 1)?;
    let mut out = Vec::with_capacity(n_max + 1);
    for (n, (an, bn)) in a.into_iter().zip(b).enumerate() {
        let direct = apery_a_direct(n);
        if !an.is_integer() || an.to_integer() != direct {
            return Err(FranelError::Inconsistent(n));
        }
        out.push(AperyPair { n, a: direct, b: bn });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn franel_values() {
        assert_eq!(franel(1, 5).unwrap(), BigInt::from(32));
        assert_eq!(franel(2, 4).unwrap(), BigInt::from(70));
        assert_eq!(franel(3, 4).unwrap(), BigInt::from(346));
        assert!(franel(0, 3).is_err());
    }

    #[test]
    fn deformed_examples() {
        for s in 1..=4 {
            let d = deformed(s, 0, 3).unwrap();
            assert_eq!(d.series, TruncSeries::one(7));
        }
        let d = deformed(3, 2, 1).unwrap();
        assert_eq!(d.series, TruncSeries::from_ints(&[10, 0, 48, 0], 3));
        // n = 1: 2 binom(2j+s-1, 2j) at t^(2j)
        for s in 1..=6u32 {
            let d = deformed(s, 1, 3).unwrap();
            for j in 0..=3usize {
                let expected = 2 * binomial((2 * j) as i64 + s as i64 - 1, (2 * j) as i64);
                assert_eq!(d.a(j), &Rational::from_integer(expected), "s={s} j={j}");
            }
        }
    }

    #[test]
    fn table_examples() {
        let t = coefficient_table(3, 3, 2).unwrap();
        assert_eq!(t.row(0).unwrap(), &[q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(t.get(1, 1), Some(&q(12, 1)));
        let t4 = coefficient_table(4, 1, 2).unwrap();
        assert_eq!(t4.get(1, 2), Some(&q(70, 1)));
        assert_eq!(t4.get(1, 2), Some(&q(4 * 5 * 6 * 7 / 12, 1)));
        let window = coefficient_table_range(3, 2, 3, 1).unwrap();
        assert_eq!(window.get(3, 1), t.get(3, 1));
        assert_eq!(window.get(1, 1), None);
    }

    #[test]
    fn apery_values() {
        let pairs = apery_zeta3(4).unwrap();
        assert_eq!((pairs[0].a.clone(), pairs[0].b.clone()), (BigInt::from(1), q(0, 1)));
        assert_eq!((pairs[1].a.clone(), pairs[1].b.clone()), (BigInt::from(5), q(1, 1)));
        assert_eq!(pairs[2].a, BigInt::from(73));
        assert_eq!(pairs[2].b, q(117, 8));
        assert!(apery_zeta3(0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn incremental_matches_from_scratch(s in 1u32..=6, n in 0usize..=14, k_frac in 0.0f64..=1.0, j in 0usize..=3) {
            let k = ((n as f64) * k_frac).round() as usize;
            let order = 2 * j + 1;
            let inc = summands_incremental(s, n, order);
            prop_assert_eq!(&inc[k], &summand_series(s, n, k, order));
        }

        #[test]
        fn summand_reflection(s in 1u32..=5, n in 0usize..=12, k_frac in 0.0f64..=1.0) {
            let k = ((n as f64) * k_frac).round() as usize;
            let a = summand_series(s, n, k, 5);
            let b = summand_series(s, n, n - k, 5);
            prop_assert_eq!(a.reflect(), b);
        }
    }
}
