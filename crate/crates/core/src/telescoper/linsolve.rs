//! Fraction-free Gauss-Jordan elimination over `Z[n]`.
//!
//! Every intermediate entry is a minor of the input matrix, so all divisions
//! by the previous pivot are exact and no rational functions ever appear.
//! After elimination each pivot row has the common determinant `D` on its
//! pivot column and zeros on all other pivot columns, which makes kernel
//! vectors read off directly: for a free column `f`, set `v_f = D` and
//! `v_p = -M[row(p)][f]` for each pivot column `p`.

use crate::algebra::UniPoly;

#[derive(Debug, Clone)]
pub struct Elimination {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub free_cols: Vec<usize>,
    /// Basis of the right kernel, one vector per free column, in order of
    /// increasing free column index.
    pub kernel: Vec<Vec<UniPoly>>,
}

/// Reduces `rows` (each of length `cols`) and returns the kernel basis.
pub fn nullspace(mut m: Vec<Vec<UniPoly>>, cols: usize) -> Elimination {
    let nrows = m.len();
    let mut prev = UniPoly::one();
    let mut pivot_cols = Vec::new();
    let mut pivot_rows = Vec::new();
    let mut row = 0usize;

    for col in 0..cols {
        if row == nrows {
            break;
        }
        // Smallest-degree nonzero entry keeps intermediate degrees low.
        let Some(p) = (row..nrows)
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| (m[i][col].degree(), m[i][col].coeffs().iter().map(|c| c.bits()).max()))
        else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col].clone();
            for j in 0..cols {
                let updated = if factor.is_zero() {
                    &r[j] * &pivot
                } else if pivot_row[j].is_zero() {
                    &r[j] * &pivot
                } else {
                    &(&r[j] * &pivot) - &(&factor * &pivot_row[j])
                };
                r[j] = if prev.is_one() {
                    updated
                } else {
                    updated.div_exact(&prev).expect("fraction-free step divides exactly")
                };
            }
        }
        prev = pivot;
        pivot_cols.push(col);
        pivot_rows.push(row);
        row += 1;
    }

    let rank = pivot_cols.len();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let det = prev;
    let kernel = free_cols
        .iter()
        .map(|&f| {
            let mut v = vec![UniPoly::zero(); cols];
            v[f] = det.clone();
            for (&pc, &pr) in pivot_cols.iter().zip(&pivot_rows) {
                v[pc] = -&m[pr][f];
            }
            v
        })
        .collect();
    Elimination { rank, pivot_cols, free_cols, kernel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn check_kernel(m: &[Vec<UniPoly>], v: &[UniPoly]) -> bool {
        m.iter().all(|row| {
            let mut acc = UniPoly::zero();
            for (a, x) in row.iter().zip(v) {
                acc = &acc + &(a * x);
            }
            acc.is_zero()
        })
    }

    /// Rank over Q at a specialization, by plain rational elimination.
    fn rank_at(m: &[Vec<UniPoly>], x: i64) -> usize {
        let x = BigInt::from(x);
        let mut a: Vec<Vec<Rational>> =
            m.iter().map(|r| r.iter().map(|p| Rational::from_integer(p.eval(&x))).collect()).collect();
        let cols = a.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(rank, p);
            for i in 0..a.len() {
                if i != rank && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[rank][c];
                    for j in 0..cols {
                        let t = &f * &a[rank][j];
                        a[i][j] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn polynomial_kernel() {
        // [[n, 1, -1], [1, n, 0]] has kernel spanned by (n, -1, n^2 - 1)
        let m = vec![
            vec![UniPoly::x(), UniPoly::one(), UniPoly::from_i64s(&[-1])],
            vec![UniPoly::one(), UniPoly::x(), UniPoly::zero()],
        ];
        let e = nullspace(m.clone(), 3);
        assert_eq!(e.rank, 2);
        assert_eq!(e.kernel.len(), 1);
        assert!(check_kernel(&m, &e.kernel[0]));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<UniPoly>>> {
        prop::collection::vec(
            prop::collection::vec(prop::collection::vec(-3i64..=3, 0..3).prop_map(|c| UniPoly::from_i64s(&c)), 4),
            1..5,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn kernel_vectors_annihilate(m in small_matrix()) {
            let e = nullspace(m.clone(), 4);
            prop_assert_eq!(e.rank + e.kernel.len(), 4);
            for v in &e.kernel {
                prop_assert!(check_kernel(&m, v));
                prop_assert!(v.iter().any(|p| !p.is_zero()));
            }
            // Generic rank equals the rank at a random-ish specialization.
            prop_assert_eq!(e.rank, rank_at(&m, 1_000_003));
        }
    }
}
