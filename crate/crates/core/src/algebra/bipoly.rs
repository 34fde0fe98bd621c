//! Sparse bivariate integer polynomials in `n` and `k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{binomial_row, Rational, UniPoly};

/// A polynomial in `Z[n, k]`, stored as a map from `(deg_n, deg_k)` to a
/// nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: BigInt, deg_n: u32, deg_k: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((deg_n, deg_k), c);
        }
        Self { terms }
    }

    pub fn n() -> Self {
        Self::monomial(BigInt::one(), 1, 0)
    }

    pub fn k() -> Self {
        Self::monomial(BigInt::one(), 0, 1)
    }

    /// `a*n + b*k + c`.
    pub fn linear(a: i64, b: i64, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term((1, 0), BigInt::from(a));
        p.add_term((0, 1), BigInt::from(b));
        p.add_term((0, 0), BigInt::from(c));
        p
    }

    /// Builds a polynomial from `(coef, deg_n, deg_k)` records; repeated
    /// monomials are summed.
    pub fn from_terms<I: IntoIterator<Item = (BigInt, u32, u32)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (c, i, j) in terms {
            p.add_term((i, j), c);
        }
        p
    }

    /// Embeds a univariate polynomial in `n`.
    pub fn from_n_poly(p: &UniPoly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| (c.clone(), i as u32, 0)))
    }

    /// Embeds a univariate polynomial in `k`.
    pub fn from_k_poly(p: &UniPoly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(j, c)| (c.clone(), 0, j as u32)))
    }

    fn add_term(&mut self, key: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Iterates over `((deg_n, deg_k), coef)` in increasing key order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, deg_n: u32, deg_k: u32) -> BigInt {
        self.terms.get(&(deg_n, deg_k)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn degree_n(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn degree_k(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0 + k.1).max()
    }

    /// Leading monomial under graded-lex order with `n > k`.
    pub fn leading_term(&self) -> Option<((u32, u32), &BigInt)> {
        self.terms
            .iter()
            .max_by_key(|(&(i, j), _)| (i + j, i))
            .map(|(&key, c)| (key, c))
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&key, a)| (key, a * c)).collect() }
    }

    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&key, a)| {
                    debug_assert!((a % c).is_zero(), "inexact scalar division");
                    (key, a / c)
                })
                .collect(),
        }
    }

    /// Non-negative gcd of all integer coefficients.
    pub fn integer_content(&self) -> BigInt {
        use num_integer::Integer;
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients with respect to `k`: entry `j` is the coefficient of
    /// `k^j` as a polynomial in `n`.
    pub fn to_k_major(&self) -> Vec<UniPoly> {
        let Some(dk) = self.degree_k() else {
            return Vec::new();
        };
        let mut rows: Vec<Vec<BigInt>> = vec![Vec::new(); dk as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, BigInt::zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::from_coeffs).collect()
    }

    pub fn from_k_major(coeffs: &[UniPoly]) -> Self {
        let mut terms = BTreeMap::new();
        for (j, p) in coeffs.iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.insert((i as u32, j as u32), c.clone());
                }
            }
        }
        Self { terms }
    }

    /// Coefficients with respect to `n`: entry `i` is the coefficient of
    /// `n^i` as a polynomial in `k`.
    pub fn to_n_major(&self) -> Vec<UniPoly> {
        self.swap_vars().to_k_major()
    }

    /// Exchanges the roles of `n` and `k`.
    pub fn swap_vars(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    /// Substitutes `n -> n + a`, `k -> k + b`.
    pub fn shift(&self, a: i64, b: i64) -> Self {
        if self.is_zero() || (a == 0 && b == 0) {
            return self.clone();
        }
        let mut rows = self.to_k_major();
        if a != 0 {
            let a = BigInt::from(a);
            rows = rows.iter().map(|p| p.shift(&a)).collect();
        }
        if b != 0 {
            rows = taylor_shift_rows(&rows, b);
        }
        Self::from_k_major(&rows)
    }

    /// Substitutes `k -> n - k`.
    pub fn reflect_k(&self) -> Self {
        let mut out = Self::zero();
        let base = Self::linear(1, -1, 0);
        let mut powers = vec![Self::one()];
        for (&(i, j), c) in &self.terms {
            while powers.len() <= j as usize {
                let next = &powers[powers.len() - 1] * &base;
                powers.push(next);
            }
            for (&(pi, pj), pc) in &powers[j as usize].terms {
                out.add_term((pi + i, pj), c * pc);
            }
        }
        out
    }

    /// Specializes `n` to an integer, leaving a polynomial in `k`.
    pub fn eval_n(&self, n: &BigInt) -> UniPoly {
        UniPoly::from_coeffs(self.to_k_major().iter().map(|p| p.eval(n)).collect())
    }

    pub fn eval(&self, n: &Rational, k: &Rational) -> Rational {
        let rows = self.to_k_major();
        let mut acc = Rational::zero();
        for p in rows.iter().rev() {
            acc = acc * k + p.eval_rational(n);
        }
        acc
    }

    /// Exact division in `Z[n, k]`; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &BiPoly) -> Option<BiPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.is_constant() {
            let c = divisor.coeff(0, 0);
            if self.terms.values().any(|a| !(a % &c).is_zero()) {
                return None;
            }
            return Some(self.div_scalar_exact(&c));
        }
        let a = self.to_k_major();
        let b = divisor.to_k_major();
        k_major_div_exact(&a, &b).map(|q| Self::from_k_major(&q))
    }

    /// Sign that makes the graded-lex leading coefficient positive.
    pub fn leading_sign(&self) -> i32 {
        if self.leading_coeff().is_negative() {
            -1
        } else {
            1
        }
    }
}

/// Taylor shift `k -> k + b` on k-major coefficient rows.
fn taylor_shift_rows(rows: &[UniPoly], b: i64) -> Vec<UniPoly> {
    let d = rows.len();
    let b = BigInt::from(b);
    let mut out = vec![UniPoly::zero(); d];
    let mut bpow = vec![BigInt::one()];
    for i in 1..d {
        let next = &bpow[i - 1] * &b;
        bpow.push(next);
    }
    for (i, row) in rows.iter().enumerate() {
        if row.is_zero() {
            continue;
        }
        let binom = binomial_row(i as u32);
        for j in 0..=i {
            let factor = &binom[j] * &bpow[i - j];
            out[j] = &out[j] + &row.scale(&factor);
        }
    }
    while out.last().is_some_and(|p| p.is_zero()) {
        out.pop();
    }
    out
}

/// Exact division of polynomials in `k` with coefficients in `Z[n]`.
pub(crate) fn k_major_div_exact(a: &[UniPoly], b: &[UniPoly]) -> Option<Vec<UniPoly>> {
    let a_len = trimmed_len(a);
    let b_len = trimmed_len(b);
    assert!(b_len > 0);
    if a_len == 0 {
        return Some(Vec::new());
    }
    if a_len < b_len {
        return None;
    }
    let db = b_len - 1;
    let lc = &b[db];
    let mut rem: Vec<UniPoly> = a[..a_len].to_vec();
    let mut quot = vec![UniPoly::zero(); a_len - db];
    for i in (0..quot.len()).rev() {
        let top = &rem[i + db];
        if top.is_zero() {
            continue;
        }
        let q = top.div_exact(lc)?;
        for (j, d) in b[..b_len].iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            rem[i + j] = &rem[i + j] - &(&q * d);
        }
        quot[i] = q;
    }
    if rem.iter().any(|p| !p.is_zero()) {
        return None;
    }
    Some(quot)
}

pub(crate) fn trimmed_len(a: &[UniPoly]) -> usize {
    let mut len = a.len();
    while len > 0 && a[len - 1].is_zero() {
        len -= 1;
    }
    len
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&key, c) in &rhs.terms {
            out.add_term(key, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&key, c) in &rhs.terms {
            out.add_term(key, -c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        // Accumulate in a dense grid; the operands are small enough that this
        // beats repeated map insertion by a wide margin.
        let (dn1, dk1) = (self.degree_n().unwrap_or(0), self.degree_k().unwrap_or(0));
        let (dn2, dk2) = (rhs.degree_n().unwrap_or(0), rhs.degree_k().unwrap_or(0));
        let width = (dk1 + dk2 + 1) as usize;
        let mut grid = vec![BigInt::zero(); (dn1 + dn2 + 1) as usize * width];
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                grid[(i1 + i2) as usize * width + (j1 + j2) as usize] += c1 * c2;
            }
        }
        let mut terms = BTreeMap::new();
        for (idx, c) in grid.into_iter().enumerate() {
            if !c.is_zero() {
                terms.insert(((idx / width) as u32, (idx % width) as u32), c);
            }
        }
        BiPoly { terms }
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&key, c)| (key, -c)).collect() }
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| std::cmp::Reverse((i + j, i)));
        for (idx, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || *key == (0, 0) {
                factors.push(mag.to_string());
            }
            match key.0 {
                0 => {}
                1 => factors.push("n".into()),
                e => factors.push(format!("n^{e}")),
            }
            match key.1 {
                0 => {}
                1 => factors.push("k".into()),
                e => factors.push(format!("k^{e}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_matches_substitution() {
        let p = &BiPoly::linear(1, -1, 1).pow(3) * &BiPoly::k();
        let shifted = p.shift(2, -1);
        let expected = &BiPoly::linear(1, -1, 4).pow(3) * &BiPoly::linear(0, 1, -1);
        assert_eq!(shifted, expected);
    }

    #[test]
    fn reflect_is_an_involution() {
        let p = &BiPoly::linear(2, 3, 1).pow(2) * &BiPoly::linear(0, 1, 5);
        assert_eq!(p.reflect_k().reflect_k(), p);
        assert_eq!(BiPoly::k().reflect_k(), BiPoly::linear(1, -1, 0));
    }

    #[test]
    fn exact_division_and_rejection() {
        let a = BiPoly::linear(1, -1, 1);
        let b = BiPoly::linear(1, 1, 0);
        let prod = &a.pow(2) * &b;
        assert_eq!(prod.div_exact(&a), Some(&a * &b));
        assert_eq!(prod.div_exact(&BiPoly::linear(1, 0, 3)), None);
        assert_eq!(prod.scale(&BigInt::from(6)).div_exact(&BiPoly::constant(BigInt::from(3))), Some(prod.scale(&BigInt::from(2))));
    }

    #[test]
    fn leading_term_is_graded_lex_n_first() {
        // n*k and k^2 share total degree 2; n*k wins because n > k.
        let p = BiPoly::from_terms([
            (BigInt::from(-3), 1, 1),
            (BigInt::from(5), 0, 2),
            (BigInt::from(7), 1, 0),
        ]);
        assert_eq!(p.leading_term().map(|(k, c)| (k, c.clone())), Some(((1, 1), BigInt::from(-3))));
        assert_eq!(p.leading_sign(), -1);
    }
}
