//! Bivariate gcd via primitive pseudo-remainder sequences.
//!
//! Polynomials are viewed in `Z[n][k]`: `k` is the main variable and the
//! coefficients are univariate integer polynomials in `n`. The content (a gcd
//! in `Z[n]`) is split off first and the primitive parts run through a
//! primitive PRS in `k`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::bipoly::{k_major_div_exact, trimmed_len};
use super::{AlgebraError, BiPoly, UniPoly};

/// Greatest common divisor of two bivariate polynomials.
///
/// The result has integer content one and a positive leading coefficient
/// under graded-lex order with `n > k`.
pub fn poly_gcd(a: &BiPoly, b: &BiPoly) -> Result<BiPoly, AlgebraError> {
    if a.is_zero() && b.is_zero() {
        return Err(AlgebraError::InvalidInput("gcd of two zero polynomials".into()));
    }
    if a.is_zero() {
        return Ok(normalize_gcd(b));
    }
    if b.is_zero() {
        return Ok(normalize_gcd(a));
    }
    if a.is_constant() || b.is_constant() {
        return Ok(BiPoly::one());
    }
    let ra = a.to_k_major();
    let rb = b.to_k_major();
    let (ca, pa) = split_content(&ra);
    let (cb, pb) = split_content(&rb);
    let cont = ca.gcd(&cb);

    let prim = if pa.len() <= 1 || pb.len() <= 1 || images_coprime(&pa, &pb) {
        vec![UniPoly::one()]
    } else {
        primitive_prs(pa, pb)
    };
    let prim = BiPoly::from_k_major(&prim);
    Ok(normalize_gcd(&(&prim * &BiPoly::from_n_poly(&cont))))
}

fn normalize_gcd(p: &BiPoly) -> BiPoly {
    let c = p.integer_content();
    let c = if p.leading_sign() < 0 { -c } else { c };
    p.div_scalar_exact(&c)
}

/// Splits k-major rows into their `Z[n]` content and primitive part.
pub(crate) fn split_content(rows: &[UniPoly]) -> (UniPoly, Vec<UniPoly>) {
    let len = trimmed_len(rows);
    let mut cont = UniPoly::zero();
    for r in &rows[..len] {
        if r.is_zero() {
            continue;
        }
        cont = cont.gcd(r);
        if cont.is_one() {
            break;
        }
    }
    if cont.is_zero() {
        return (UniPoly::zero(), Vec::new());
    }
    if cont.is_one() {
        return (cont, rows[..len].to_vec());
    }
    let prim = rows[..len]
        .iter()
        .map(|r| r.div_exact(&cont).expect("content divides every coefficient"))
        .collect();
    (cont, prim)
}

/// Cheap coprimality certificate: if the specializations at some integer `n`
/// that keeps both leading coefficients nonzero are coprime over `Q[k]`, the
/// gcd has degree zero in `k`.
fn images_coprime(a: &[UniPoly], b: &[UniPoly]) -> bool {
    let lca = &a[a.len() - 1];
    let lcb = &b[b.len() - 1];
    for probe in [7i64, 23, 101, 1009] {
        let x = BigInt::from(probe);
        if lca.eval(&x).is_zero() || lcb.eval(&x).is_zero() {
            continue;
        }
        let ia = UniPoly::from_coeffs(a.iter().map(|p| p.eval(&x)).collect());
        let ib = UniPoly::from_coeffs(b.iter().map(|p| p.eval(&x)).collect());
        return ia.gcd(&ib).degree() == Some(0);
    }
    false
}

fn primitive_prs(pa: Vec<UniPoly>, pb: Vec<UniPoly>) -> Vec<UniPoly> {
    let (mut x, mut y) = if pa.len() >= pb.len() { (pa, pb) } else { (pb, pa) };
    loop {
        let r = pseudo_rem_rows(&x, &y);
        if trimmed_len(&r) == 0 {
            return y;
        }
        let (_, pr) = split_content(&r);
        if pr.len() <= 1 {
            return vec![UniPoly::one()];
        }
        x = y;
        y = pr;
    }
}

/// Pseudo-remainder of k-major rows with `Z[n]` coefficients.
pub(crate) fn pseudo_rem_rows(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let db = trimmed_len(b) - 1;
    let lc = &b[db];
    let mut r: Vec<UniPoly> = a[..trimmed_len(a)].to_vec();
    while r.len() > db && !r.is_empty() {
        let top = r.pop().expect("non-empty");
        let shift = r.len() - db;
        for c in r.iter_mut() {
            *c = &*c * lc;
        }
        for j in 0..db {
            if b[j].is_zero() {
                continue;
            }
            r[shift + j] = &r[shift + j] - &(&top * &b[j]);
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Exact division helper used by rational-function normalization.
pub(crate) fn div_exact_or_panic(a: &BiPoly, b: &BiPoly) -> BiPoly {
    if b.is_one() {
        return a.clone();
    }
    let q = k_major_div_exact(&a.to_k_major(), &b.to_k_major())
        .expect("gcd must divide its arguments exactly");
    BiPoly::from_k_major(&q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lin(a: i64, b: i64, c: i64) -> BiPoly {
        BiPoly::linear(a, b, c)
    }

    #[test]
    fn difference_of_squares() {
        let a = &lin(1, 0, 0).pow(2) - &lin(0, 1, 0).pow(2);
        assert_eq!(poly_gcd(&a, &lin(1, -1, 0)).unwrap(), lin(1, -1, 0));
    }

    #[test]
    fn coprime_linear_forms() {
        assert_eq!(poly_gcd(&lin(1, 0, 1), &lin(0, 1, 2)).unwrap(), BiPoly::one());
    }

    #[test]
    fn mixed_content_and_primitive_factor() {
        // gcd((n+1)^2 (n-k), (n+1)(k+2)) = n+1
        let a = &lin(1, 0, 1).pow(2) * &lin(1, -1, 0);
        let b = &lin(1, 0, 1) * &lin(0, 1, 2);
        let g = poly_gcd(&a, &b).unwrap();
        assert_eq!(g, lin(1, 0, 1));
        // exhaustive division checks on the expanded products
        let qa = a.div_exact(&g).unwrap();
        let qb = b.div_exact(&g).unwrap();
        assert_eq!(&qa * &g, a);
        assert_eq!(&qb * &g, b);
        assert_eq!(poly_gcd(&qa, &qb).unwrap(), BiPoly::one());
    }

    #[test]
    fn zero_inputs() {
        assert!(poly_gcd(&BiPoly::zero(), &BiPoly::zero()).is_err());
        let p = lin(-2, 4, -6);
        assert_eq!(poly_gcd(&p, &BiPoly::zero()).unwrap(), lin(1, -2, 3));
    }

    #[test]
    fn shared_k_factor_with_n_coefficients() {
        let f = &(&lin(1, 0, 0) * &lin(0, 1, 0)) + &BiPoly::one(); // nk + 1
        let a = &f.pow(2) * &lin(2, 1, 3);
        let b = &f * &lin(1, 3, -1).pow(2);
        assert_eq!(poly_gcd(&a, &b).unwrap(), f);
    }

    fn small_poly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec((-4i64..=4, 0u32..=2, 0u32..=2), 1..5)
            .prop_map(|ts| BiPoly::from_terms(ts.into_iter().map(|(c, i, j)| (BigInt::from(c), i, j))))
    }

    /// Strips integer content and sign so associates compare equal.
    fn canon(p: &BiPoly) -> BiPoly {
        normalize_gcd(p)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn gcd_times_common_factor(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let lhs = poly_gcd(&(&a * &c), &(&b * &c)).unwrap();
            let rhs = &poly_gcd(&a, &b).unwrap() * &c;
            prop_assert_eq!(canon(&lhs), canon(&rhs));
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly()) {
            prop_assume!(!a.is_zero() || !b.is_zero());
            let g = poly_gcd(&a, &b).unwrap();
            prop_assert!(a.div_exact(&g).is_some());
            prop_assert!(b.div_exact(&g).is_some());
        }
    }
}
