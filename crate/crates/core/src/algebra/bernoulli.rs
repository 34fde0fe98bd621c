use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{binomial_row, Rational};

/// Exact Bernoulli numbers `B_0..=B_M` with the convention `B_1 = -1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }
}

/// Computes `B_0..=B_max` from `sum_{i=0}^{m} C(m+1, i) B_i = 0`.
pub fn bernoulli(max: usize) -> BernoulliTable {
    let mut values: Vec<Rational> = vec![Rational::one()];
    for m in 1..=max {
        if m >= 3 && m % 2 == 1 {
            values.push(Rational::zero());
            continue;
        }
        let row = binomial_row(m as u32 + 1);
        let mut acc = Rational::zero();
        for (i, b) in values.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(row[i].clone()) * b;
            }
        }
        values.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    BernoulliTable { values }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn known_values() {
        let t = bernoulli(12);
        assert_eq!(t.get(0), &q(1, 1));
        assert_eq!(t.get(1), &q(-1, 2));
        assert_eq!(t.get(2), &q(1, 6));
        assert_eq!(t.get(3), &q(0, 1));
        assert_eq!(t.get(4), &q(-1, 30));
        assert_eq!(t.get(12), &q(-691, 2730));
    }

    #[test]
    fn defining_recurrence_holds() {
        let t = bernoulli(40);
        for m in 1..=40usize {
            let row = binomial_row(m as u32 + 1);
            let sum: Rational = (0..=m).map(|i| Rational::from_integer(row[i].clone()) * t.get(i)).sum();
            assert!(sum.is_zero(), "m = {m}");
        }
    }

    #[test]
    fn b12_matches_zeta_12() {
        // zeta(12) = 691 pi^12 / 638512875 and zeta(2j) = (-1)^(j+1) B_2j (2 pi)^(2j) / (2 (2j)!)
        let t = bernoulli(12);
        let fact12: BigInt = (1..=12u32).map(BigInt::from).product();
        let via_b = -t.get(12) * Rational::from_integer(BigInt::from(4096u32))
            / Rational::from_integer(BigInt::from(2) * fact12);
        assert_eq!(via_b, q(691, 638512875));
    }
}
