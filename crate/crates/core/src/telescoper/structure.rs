//! Structural audit of a telescoping pair for `binom(n,k)^s`: operator order
//! and coefficient degree, the shape of the certificate denominator, and the
//! degrees of its numerator.

use num_traits::Signed;

use super::Certificate;
use crate::algebra::{split_content, BiPoly};
use crate::operator::RecurrenceOperator;

/// Search cap for non-negative integer roots in `n`.
const ROOT_SCAN_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub s: u32,
    pub order: usize,
    pub expected_order: usize,
    pub coeff_degree: usize,
    pub expected_degree: usize,
    /// Denominator equals `prod_{j=1..m} (n-k+j)^s` up to sign.
    pub denominator_matches: bool,
    /// Denominator divides `prod_{j=1..m} (n-k+j)^s`.
    pub denominator_divides: bool,
    pub numerator_k_degree: usize,
    pub expected_numerator_k_degree: usize,
    pub numerator_n_degree: usize,
    pub expected_numerator_n_degree: i64,
    /// Non-negative integers `n0` with `(n - n0)` dividing the denominator.
    pub integer_roots_of_denominator_in_n: Vec<i64>,
}

impl StructureReport {
    /// All predicted quantities agree with the observed ones.
    pub fn all_match(&self) -> bool {
        self.order == self.expected_order
            && self.coeff_degree == self.expected_degree
            && self.denominator_matches
            && self.numerator_k_degree == self.expected_numerator_k_degree
    }
}

/// `m = floor((s+1)/2)`.
pub fn expected_order(s: u32) -> usize {
    (s as usize + 1) / 2
}

/// Predicted degree in `n` of the minimal operator's coefficients.
pub fn expected_coeff_degree(s: u32) -> usize {
    let m = expected_order(s) as i64;
    if s % 2 == 0 {
        (m * (m * m - 1) / 3 + 1) as usize
    } else {
        // 12 * (m^3/3 - m^2/2 + 2m/3 + ((-1)^m - 1)/4)
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let twelve = 4 * m * m * m - 6 * m * m + 8 * m + 3 * (sign - 1);
        (twelve / 12) as usize
    }
}

fn delta(r: u32, s: u32) -> i64 {
    i64::from(s % r == 0)
}

/// `prod_{j=1..m} (n - k + j)^s`.
pub fn expected_denominator(s: u32) -> BiPoly {
    let mut p = BiPoly::one();
    for j in 1..=expected_order(s) as i64 {
        p = &p * &BiPoly::linear(1, -1, j).pow(s);
    }
    p
}

pub fn analyze_structure(p: &RecurrenceOperator, c: &Certificate, s: u32) -> StructureReport {
    let m = expected_order(s);
    let num = c.r().num();
    let den = c.r().den();
    let target = expected_denominator(s);
    let denominator_matches = den == &target || den == &(-&target);
    let denominator_divides = !den.is_zero() && target.div_exact(den).is_some();

    let (content, _) = split_content(&den.to_k_major());
    let mut roots: Vec<i64> =
        content.integer_roots(ROOT_SCAN_LIMIT).into_iter().filter(|r| !r.is_negative()).collect();
    roots.sort_unstable();
    roots.dedup();

    let d = expected_coeff_degree(s) as i64;
    let si = i64::from(s);
    StructureReport {
        s,
        order: p.order(),
        expected_order: m,
        coeff_degree: p.coeff_degree(),
        expected_degree: d as usize,
        denominator_matches,
        denominator_divides,
        numerator_k_degree: num.degree_k().unwrap_or(0) as usize,
        expected_numerator_k_degree: m * s as usize + delta(2, s) as usize,
        numerator_n_degree: num.degree_n().unwrap_or(0) as usize,
        expected_numerator_n_degree: d + si * (si - 1 - delta(2, s)) / 2 - delta(6, s),
        integer_roots_of_denominator_in_n: roots,
    }
}
