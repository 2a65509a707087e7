//! `f_k`: the number of `k`-sets fixed by a permutation of a given type.
//! A fixed set is a union of cycles, so `f_k` is the coefficient of `x^k`
//! in `prod_j (1 + x^j)^{c_j}`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cycle_type::CycleType;
use crate::exact::binomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSetPolynomial {
    pub n: usize,
    /// `f_0, ..., f_d` where `d` is `n` or the truncation degree.
    #[serde(with = "crate::serde_big::biguint_vec")]
    pub coefficients: Vec<BigUint>,
}

impl FixedSetPolynomial {
    /// `f_k`, zero past the stored degree.
    pub fn coefficient(&self, k: usize) -> BigUint {
        self.coefficients.get(k).cloned().unwrap_or_default()
    }

    pub fn sum(&self) -> BigUint {
        self.coefficients.iter().sum()
    }
}

pub fn fixed_set_polynomial(t: &CycleType) -> FixedSetPolynomial {
    fixed_set_counts_upto(t, t.degree())
}

/// `f_0, ..., f_{k_max}` only; cheap at large `n` when `k_max` is small.
pub fn fixed_set_counts_upto(t: &CycleType, k_max: usize) -> FixedSetPolynomial {
    let k_max = k_max.min(t.degree());
    let mut coeffs = vec![BigUint::zero(); k_max + 1];
    coeffs[0] = BigUint::one();
    let mut degree = 0usize;
    for (&j, &c) in t.counts() {
        if j > k_max {
            continue;
        }
        // Multiply by (1 + x^j)^c = sum_i C(c, i) x^{ij}.
        let terms = c.min(k_max / j);
        let factor: Vec<BigUint> = (0..=terms).map(|i| binomial(c, i)).collect();
        let new_degree = (degree + terms * j).min(k_max);
        let mut next = vec![BigUint::zero(); k_max + 1];
        for (a, ca) in coeffs.iter().enumerate().take(degree + 1) {
            if ca.is_zero() {
                continue;
            }
            for (i, b) in factor.iter().enumerate() {
                let e = a + i * j;
                if e > k_max {
                    break;
                }
                next[e] += ca * b;
            }
        }
        coeffs = next;
        degree = new_degree;
    }
    FixedSetPolynomial {
        n: t.degree(),
        coefficients: coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle_type::all_cycle_types;

    fn f(s: &str) -> Vec<u64> {
        let t: CycleType = s.parse().unwrap();
        fixed_set_polynomial(&t)
            .coefficients
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect()
    }

    #[test]
    fn small_types() {
        assert_eq!(f("1^4"), vec![1, 4, 6, 4, 1]);
        assert_eq!(f("5"), vec![1, 0, 0, 0, 0, 1]);
        assert_eq!(f("1^2,2"), vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn sums_to_two_to_the_cycles() {
        for n in 1..=12 {
            for t in all_cycle_types(n) {
                let poly = fixed_set_polynomial(&t);
                assert_eq!(poly.sum(), BigUint::one() << t.total_cycles());
                assert_eq!(poly.coefficients.len(), n + 1);
                assert_eq!(poly.coefficient(n), BigUint::one());
            }
        }
    }

    #[test]
    fn truncation_agrees_with_full() {
        for t in all_cycle_types(11) {
            let full = fixed_set_polynomial(&t);
            for k in 0..=11 {
                let part = fixed_set_counts_upto(&t, k);
                assert_eq!(part.coefficients[..], full.coefficients[..=k]);
            }
        }
        let big: CycleType = "1^100,9900".parse().unwrap();
        let part = fixed_set_counts_upto(&big, 3);
        assert_eq!(part.coefficient(3), binomial(100, 3));
    }
}
