//! Zeilberger's creative telescoping for a bivariate hypergeometric term.
//!
//! For a trial order `r` the summand `t_k = sum_i c_i a(n+i,k)` is split as
//! `a(n,k) * p_lin(k) / B(n,k)` where `B` is the common denominator of the
//! shift quotients `a(n+i,k)/a(n,k)` and `p_lin` is linear in the unknown
//! `c_i`. The remaining hypergeometric factor `a/B` is brought into
//! Gosper-Petkovsek form `q(k)/r(k+1) * c(k+1)/c(k)`, and the parameterized
//! Gosper equation
//!
//! ```text
//! q(k) x(k+1) - r(k) x(k) = c(k) p_lin(k)
//! ```
//!
//! is solved for a polynomial `x` and the `c_i` jointly, by comparing
//! coefficients of `k` and computing a kernel over `Q(n)` with fraction-free
//! elimination. The certificate is `R = r(k) x(k) / (c(k) B(n,k))`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::linsolve::nullspace;
use super::{Certificate, OrderAttempt, TelescopeError};
use crate::algebra::{poly_gcd, split_content, BiPoly, RatFunc, UniPoly};
use crate::hyperterm::{shift_quotients, HyperTerm};
use crate::operator::RecurrenceOperator;

/// Largest dispersion scanned before giving up.
const MAX_DISPERSION: usize = 100_000;

/// Gosper-Petkovsek form of a term ratio.
#[derive(Debug, Clone)]
pub(crate) struct GosperForm {
    pub q: BiPoly,
    /// `r(k)`, i.e. the ratio denominator shifted back by one.
    pub r: BiPoly,
    pub c: BiPoly,
}

pub(crate) struct OrderSolution {
    pub attempt: OrderAttempt,
    pub found: Option<(RecurrenceOperator, Certificate)>,
}

pub(crate) fn solve_order(term: &HyperTerm, order: usize) -> Result<OrderSolution, TelescopeError> {
    let sigmas = shift_quotients(term, order);

    let mut common_den = BiPoly::one();
    for s in &sigmas {
        common_den = lcm(&common_den, s.den())?;
    }
    let parts: Vec<BiPoly> = sigmas
        .iter()
        .map(|s| s.num() * &common_den.div_exact(s.den()).expect("lcm is a multiple"))
        .collect();

    let ratio = term.rho_k().mul(&RatFunc::new(common_den.clone(), common_den.shift(0, 1))?);
    let form = gosper_petkovsek(ratio.num(), ratio.den())?;
    let p_parts: Vec<BiPoly> = parts.iter().map(|p| p * &form.c).collect();

    let deg_p = p_parts.iter().filter_map(BiPoly::degree_k).max();
    let x_degree = deg_p.and_then(|dp| degree_bound(&form.q, &form.r, dp as i64));

    // Columns: x_0..x_d, then c_0..c_r.
    let nx = x_degree.map_or(0, |d| d as usize + 1);
    let mut columns: Vec<Vec<UniPoly>> = Vec::with_capacity(nx + order + 1);
    let step = BiPoly::linear(0, 1, 1);
    let mut up = BiPoly::one(); // (k+1)^j
    let mut plain = BiPoly::one(); // k^j
    for _ in 0..nx {
        let col = &(&form.q * &up) - &(&form.r * &plain);
        columns.push(col.to_k_major());
        up = &up * &step;
        plain = &plain * &BiPoly::k();
    }
    for p in &p_parts {
        columns.push((-p).to_k_major());
    }
    let ncols = columns.len();
    let nrows = columns.iter().map(Vec::len).max().unwrap_or(0);

    // Strip each column's content in Z[n]; the unknown absorbs it.
    let mut scales = Vec::with_capacity(ncols);
    for col in columns.iter_mut() {
        let (cont, prim) = split_content(col);
        if cont.is_zero() {
            scales.push(UniPoly::one());
            continue;
        }
        *col = prim;
        scales.push(cont);
    }
    let matrix: Vec<Vec<UniPoly>> = (0..nrows)
        .map(|e| columns.iter().map(|col| col.get(e).cloned().unwrap_or_default()).collect())
        .collect();

    let elim = nullspace(matrix, ncols);
    let attempt = OrderAttempt {
        order,
        x_degree: x_degree.map(|d| d as usize),
        unknowns: ncols,
        equations: nrows,
        kernel_dim: elim.kernel.len(),
        solvable: false,
    };

    // First kernel vector (by free column) whose operator part is nonzero.
    let Some(w) = elim.kernel.into_iter().find(|v| v[nx..].iter().any(|p| !p.is_zero())) else {
        return Ok(OrderSolution { attempt, found: None });
    };

    // Undo the column scaling: v_j = w_j / scale_j, cleared by lcm(scales).
    let mut denom_lcm = UniPoly::one();
    for s in &scales {
        denom_lcm = uni_lcm(&denom_lcm, s);
    }
    let v: Vec<UniPoly> = w
        .iter()
        .zip(&scales)
        .map(|(wj, sj)| wj * &denom_lcm.div_exact(sj).expect("lcm is a multiple"))
        .collect();

    let mut g = UniPoly::zero();
    for c in &v[nx..] {
        g = g.gcd(c);
    }
    let top = v[nx..].iter().rev().find(|c| !c.is_zero()).expect("nonzero operator part");
    if top.div_exact(&g).expect("gcd divides").leading_coeff().is_negative() {
        g = -&g;
    }
    let coeffs: Vec<UniPoly> = v[nx..].iter().map(|c| c.div_exact(&g).expect("gcd divides")).collect();
    let operator = RecurrenceOperator::new(coeffs).map_err(|e| TelescopeError::Internal(e.to_string()))?;

    let mut x_poly = BiPoly::zero();
    for (j, coef) in v[..nx].iter().enumerate() {
        x_poly = &x_poly + &(&BiPoly::from_n_poly(coef) * &BiPoly::k().pow(j as u32));
    }
    let cert_den = &(&form.c * &common_den) * &BiPoly::from_n_poly(&g);
    let certificate = Certificate::new(RatFunc::new(&form.r * &x_poly, cert_den)?);

    Ok(OrderSolution { attempt: OrderAttempt { solvable: true, ..attempt }, found: Some((operator, certificate)) })
}

fn lcm(a: &BiPoly, b: &BiPoly) -> Result<BiPoly, TelescopeError> {
    if a.is_one() {
        return Ok(b.clone());
    }
    let g = poly_gcd(a, b)?;
    Ok(a * &b.div_exact(&g).expect("gcd divides"))
}

fn uni_lcm(a: &UniPoly, b: &UniPoly) -> UniPoly {
    if a.is_one() {
        return b.clone();
    }
    let g = a.gcd(b);
    a * &b.div_exact(&g).expect("gcd divides")
}

/// Primitive part with respect to `k` (drops factors that only involve `n`).
fn k_primitive(p: &BiPoly) -> BiPoly {
    let (_, prim) = split_content(&p.to_k_major());
    BiPoly::from_k_major(&prim)
}

/// Splits `num/den` (a ratio `t(k+1)/t(k)`) into Gosper-Petkovsek form.
pub(crate) fn gosper_petkovsek(num: &BiPoly, den: &BiPoly) -> Result<GosperForm, TelescopeError> {
    let mut a = num.clone();
    let mut b = den.clone();
    let mut c = BiPoly::one();
    for j in dispersion_set(&a, &b)? {
        let g = k_primitive(&poly_gcd(&a, &b.shift(0, j as i64))?);
        if g.degree_k().unwrap_or(0) == 0 {
            continue;
        }
        a = a.div_exact(&g).expect("gcd divides");
        b = b.div_exact(&g.shift(0, -(j as i64))).expect("shifted gcd divides");
        for i in 1..=j {
            c = &c * &g.shift(0, -(i as i64));
        }
    }
    Ok(GosperForm { q: a, r: b.shift(0, -1), c })
}

/// Positive integers `j` with `gcd(a(k), b(k+j))` of positive degree in `k`.
///
/// Candidates come from a scan at a specialization of `n` that keeps both
/// leading coefficients alive, so no true shift is missed; each candidate is
/// then confirmed symbolically.
fn dispersion_set(a: &BiPoly, b: &BiPoly) -> Result<Vec<usize>, TelescopeError> {
    let (Some(da), Some(db)) = (a.degree_k(), b.degree_k()) else {
        return Ok(Vec::new());
    };
    if da == 0 || db == 0 {
        return Ok(Vec::new());
    }
    let ra = a.to_k_major();
    let rb = b.to_k_major();
    let probe = [13i64, 29, 101, 389, 1013]
        .into_iter()
        .map(BigInt::from)
        .find(|x| !ra[da as usize].eval(x).is_zero() && !rb[db as usize].eval(x).is_zero())
        .ok_or_else(|| TelescopeError::Internal("no usable specialization for dispersion".into()))?;
    let sa = a.eval_n(&probe);
    let sb = b.eval_n(&probe);
    let bound = root_bound(&sa) + root_bound(&sb);
    if bound > MAX_DISPERSION as f64 {
        return Err(TelescopeError::DispersionTooLarge(bound));
    }
    let mut out = Vec::new();
    for j in 1..=bound.ceil() as usize {
        let shifted = sb.shift(&BigInt::from(j));
        if sa.gcd(&shifted).degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = k_primitive(&poly_gcd(a, &b.shift(0, j as i64))?);
        if g.degree_k().unwrap_or(0) > 0 {
            out.push(j);
        }
    }
    Ok(out)
}

/// Fujiwara's bound on the modulus of the complex roots.
fn root_bound(p: &UniPoly) -> f64 {
    let Some(d) = p.degree() else { return 0.0 };
    if d == 0 {
        return 0.0;
    }
    let lc = p.leading_coeff().abs().to_f64().unwrap_or(f64::INFINITY);
    let mut best: f64 = 0.0;
    for i in 1..=d {
        let c = p.coeffs()[d - i].abs().to_f64().unwrap_or(f64::INFINITY);
        let mut term = (c / lc).powf(1.0 / i as f64);
        if i == d {
            term = (c / (2.0 * lc)).powf(1.0 / i as f64);
        }
        best = best.max(term);
    }
    2.0 * best + 1.0
}

/// Degree bound for polynomial solutions of `q x(k+1) - r x(k) = p` with
/// `deg_k p = deg_p`. `None` means only `x = 0` is possible.
fn degree_bound(q: &BiPoly, r: &BiPoly, deg_p: i64) -> Option<i64> {
    let minus = q - r;
    let plus = q + r;
    let dm = minus.degree_k().map(i64::from);
    let dp = plus.degree_k().map(i64::from);
    let d = match (dm, dp) {
        (Some(m), Some(p)) if m < p => {
            let base = deg_p - p + 1;
            match degenerate_root(&minus, &plus, p as usize) {
                Some(alt) => base.max(alt),
                None => base,
            }
        }
        (None, Some(p)) => {
            let base = deg_p - p + 1;
            base.max(0)
        }
        (Some(m), _) => deg_p - m,
        (None, None) => return None,
    };
    (d >= 0).then_some(d)
}

/// `-2 * [k^(L-1)](q - r) / [k^L](q + r)` when it is a non-negative integer
/// independent of `n`.
fn degenerate_root(minus: &BiPoly, plus: &BiPoly, l: usize) -> Option<i64> {
    let lc_plus = plus.to_k_major()[l].clone();
    let m_rows = minus.to_k_major();
    let sub = m_rows.get(l - 1).cloned().unwrap_or_default();
    if sub.is_zero() {
        return Some(0);
    }
    // Proportional with a constant ratio?
    let (a, b) = (sub.leading_coeff(), lc_plus.leading_coeff());
    if &sub.scale(&b) != &lc_plus.scale(&a) {
        return None;
    }
    let ratio = BigRational::new(-BigInt::from(2) * a, b);
    if ratio.is_integer() && !ratio.is_negative() {
        ratio.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gosper_form_removes_shift_equivalent_factors() {
        // ratio (k+3)/(k+1): dispersion 2, so q = r = 1 and c = (k+1)(k+2)
        let form = gosper_petkovsek(&BiPoly::linear(0, 1, 3), &BiPoly::linear(0, 1, 1)).unwrap();
        assert!(form.q.is_constant());
        assert!(form.r.is_constant());
        assert_eq!(form.c, &BiPoly::linear(0, 1, 1) * &BiPoly::linear(0, 1, 2));
    }

    #[test]
    fn gosper_form_of_binomial_ratio_is_trivial() {
        let num = BiPoly::linear(1, -1, 2).pow(3);
        let den = BiPoly::linear(0, 1, 1).pow(3);
        let form = gosper_petkovsek(&num, &den).unwrap();
        assert_eq!(form.q, num);
        assert_eq!(form.r, BiPoly::k().pow(3));
        assert!(form.c.is_one());
    }

    #[test]
    fn degree_bounds() {
        // q = (n+2-k)^3, r = k^3: odd case, deg x = deg p - 3.
        let q = BiPoly::linear(1, -1, 2).pow(3);
        let r = BiPoly::k().pow(3);
        assert_eq!(degree_bound(&q, &r, 6), Some(3));
        // even: q = (n+2-k)^4, r = k^4 -> deg p - 4 + 1
        let q = BiPoly::linear(1, -1, 2).pow(4);
        let r = BiPoly::k().pow(4);
        assert_eq!(degree_bound(&q, &r, 8), Some(5));
        // q = r = 1: classic degenerate case with candidate 0
        assert_eq!(degree_bound(&BiPoly::one(), &BiPoly::one(), 2), Some(3));
    }

    #[test]
    fn root_bound_dominates_roots() {
        let p = &(&UniPoly::linear(-16) * &UniPoly::linear(3)) * &UniPoly::linear(40);
        assert!(root_bound(&p) >= 40.0);
    }
}
