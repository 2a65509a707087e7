//! Exact expectations of the orbit counts `N_k` for `pi` uniform in one
//! class and `pi'` uniform in another.
//!
//! A `k`-set is an orbit iff both permutations fix it and act transitively
//! on it. Summing over the types `D`, `D'` of the two restrictions,
//!
//! `E N_k = sum_{D, D'} prod_j C(c_j, d_j) C(c'_j, d'_j) / C(n, k) * p(D; D')`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::transitive::TransitivePairCounter;
use crate::cycle_type::{all_cycle_types, CycleType};
use crate::error::{Error, Result};
use crate::exact::{binomial, falling_factorial, ratio, rational_to_f64, BigRational};

/// Largest `k` accepted by [`expected_nk_exact`] unless overridden.
pub const DEFAULT_EXACT_LIMIT: usize = 10;

/// Sub-types of `t` of total size `k`.
fn sub_types_of_size(t: &CycleType, k: usize) -> Vec<CycleType> {
    all_cycle_types(k)
        .into_iter()
        .filter(|d| t.contains(d))
        .collect()
}

/// `prod_j C(c_j, d_j)`: the number of `pi`-invariant `k`-sets on which
/// `pi` restricts to type `d`.
fn invariant_sets_of_type(t: &CycleType, d: &CycleType) -> BigUint {
    d.counts()
        .iter()
        .map(|(&j, &dj)| binomial(t.count(j), dj))
        .product()
}

/// Evaluator sharing one transitive-pair memo across many `k`.
#[derive(Default)]
pub struct ExpectedOrbitCounts {
    counter: TransitivePairCounter,
    limit: usize,
}

impl ExpectedOrbitCounts {
    pub fn new() -> Self {
        Self::with_limit(DEFAULT_EXACT_LIMIT)
    }

    pub fn with_limit(limit: usize) -> Self {
        ExpectedOrbitCounts {
            counter: TransitivePairCounter::new(),
            limit,
        }
    }

    pub fn nk(&mut self, t: &CycleType, t2: &CycleType, k: usize) -> Result<BigRational> {
        let n = t.degree();
        if t2.degree() != n {
            return Err(Error::DegreeMismatch(n, t2.degree()));
        }
        if k > self.limit {
            return Err(Error::ExactLimitExceeded { k, limit: self.limit });
        }
        if k == 0 || k > n {
            return Err(Error::Precondition(format!("need 1 <= k <= n, got k = {k}")));
        }
        let ds2: Vec<(CycleType, BigUint)> = sub_types_of_size(t2, k)
            .into_iter()
            .map(|d| {
                let w = invariant_sets_of_type(t2, &d);
                (d, w)
            })
            .collect();
        let mut sum = BigRational::zero();
        for d in sub_types_of_size(t, k) {
            let w = invariant_sets_of_type(t, &d);
            for (d2, w2) in &ds2 {
                let p = self.counter.probability(&d, d2)?;
                if p.is_zero() {
                    continue;
                }
                sum += BigRational::from_integer(BigInt::from(&w * w2)) * p;
            }
        }
        Ok(sum / BigRational::from_integer(BigInt::from(binomial(n, k))))
    }
}

pub fn expected_nk_exact(t: &CycleType, t2: &CycleType, k: usize) -> Result<BigRational> {
    ExpectedOrbitCounts::new().nk(t, t2, k)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalValue {
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
}

impl From<&BigRational> for RationalValue {
    fn from(r: &BigRational) -> Self {
        RationalValue {
            numerator: r.numer().to_string(),
            denominator: r.denom().to_string(),
            value: rational_to_f64(r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTerm {
    pub k: usize,
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
}

/// `E N_k` for `k = 1..=k_max` and their sum, a truncation of `E N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub class: String,
    pub class2: String,
    pub terms: Vec<MomentTerm>,
    pub sum: RationalValue,
    /// `Some(k_max)` when terms with `k_max < k <= n/2` are left out.
    pub truncated_at: Option<usize>,
    #[serde(skip)]
    pub exact_terms: Vec<BigRational>,
    #[serde(skip)]
    pub exact_sum: BigRational,
}

impl MomentReport {
    /// `E N_{<= k_max}` as a float.
    pub fn lambda(&self) -> f64 {
        rational_to_f64(&self.exact_sum)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

pub fn expected_n(t: &CycleType, t2: &CycleType, k_max: usize) -> Result<MomentReport> {
    expected_n_with_limit(t, t2, k_max, DEFAULT_EXACT_LIMIT)
}

pub fn expected_n_with_limit(
    t: &CycleType,
    t2: &CycleType,
    k_max: usize,
    limit: usize,
) -> Result<MomentReport> {
    let n = t.degree();
    if k_max > n / 2 {
        return Err(Error::Precondition(format!("k_max = {k_max} exceeds n/2 = {}", n / 2)));
    }
    let mut eval = ExpectedOrbitCounts::with_limit(limit);
    let mut terms = Vec::new();
    let mut exact_terms = Vec::new();
    let mut sum = BigRational::zero();
    for k in 1..=k_max {
        let v = eval.nk(t, t2, k)?;
        sum += &v;
        terms.push(MomentTerm {
            k,
            numerator: v.numer().to_string(),
            denominator: v.denom().to_string(),
            value: rational_to_f64(&v),
        });
        exact_terms.push(v);
    }
    Ok(MomentReport {
        n,
        class: t.to_string(),
        class2: t2.to_string(),
        terms,
        sum: RationalValue::from(&sum),
        truncated_at: (k_max < n / 2).then_some(k_max),
        exact_terms,
        exact_sum: sum,
    })
}

/// Probability that uniform random subsets of sizes `c1` and `c1p` of an
/// `n`-set are disjoint: `prod_{i < c1p} (n - c1 - i) / (n - i)`.
pub fn common_fixed_point_disjoint_prob(c1: usize, c1p: usize, n: usize) -> Result<BigRational> {
    if c1 > n || c1p > n {
        return Err(Error::Precondition(format!("set sizes {c1}, {c1p} exceed n = {n}")));
    }
    if c1 + c1p > n {
        return Ok(BigRational::zero());
    }
    Ok(ratio(falling_factorial(n - c1, c1p), falling_factorial(n, c1p)))
}

/// Exact probability that `pi` of type `t` and a uniform conjugate of an
/// element of type `t2` share a 2-cycle, by inclusion-exclusion over the
/// number `j` of shared 2-cycles:
/// `sum_j (-1)^{j+1} C(c_2, j) * (c'_2)_j 2^j (n - 2j)! / n!`.
pub fn two_cycle_collision_exact(t: &CycleType, t2: &CycleType) -> Result<BigRational> {
    let n = t.degree();
    if t2.degree() != n {
        return Err(Error::DegreeMismatch(n, t2.degree()));
    }
    let (a, b) = (t.two_cycles(), t2.two_cycles());
    let mut total = BigRational::zero();
    let mut pow2 = BigUint::one();
    for j in 1..=a.min(b) {
        pow2 <<= 1;
        // P(j given 2-cycles of pi are all 2-cycles of pi'): pi' must map a
        // fixed set of j disjoint pairs onto j of its own 2-cycles.
        let hits = binomial(a, j) * falling_factorial(b, j) * &pow2;
        let p = ratio(hits, falling_factorial(n, 2 * j));
        if j % 2 == 1 {
            total += p;
        } else {
            total -= p;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    fn q(a: u64, b: u64) -> BigRational {
        ratio(a.into(), b.into())
    }

    #[test]
    fn examples() {
        assert_eq!(expected_nk_exact(&ct("2^2"), &ct("2^2"), 2).unwrap(), q(2, 3));
        assert_eq!(expected_nk_exact(&ct("1^6"), &ct("1^2,4"), 1).unwrap(), q(2, 1));
        for k in 1..7 {
            assert_eq!(expected_nk_exact(&ct("7"), &ct("7"), k).unwrap(), q(0, 1));
        }
        let r = expected_n(&ct("1^4"), &ct("1^4"), 2).unwrap();
        assert_eq!(r.exact_terms, vec![q(4, 1), q(0, 1)]);
        assert_eq!(r.truncated_at, None);
    }

    #[test]
    fn fixed_point_term_is_c1_c1p_over_n() {
        let t = ct("1^100,9900");
        let r = expected_n(&t, &t, 3).unwrap();
        assert_eq!(r.exact_terms[0], q(1, 1));
        assert!(r.lambda() >= 0.9 && r.lambda() <= 1.2, "{}", r.lambda());
        assert_eq!(r.truncated_at, Some(3));
        let json = r.to_json();
        assert!(json.contains("\"terms\":[{\"k\":1,\"numerator\":\"1\""), "{json}");
    }

    #[test]
    fn limit_enforced() {
        let t = ct("1^30");
        assert_eq!(
            expected_nk_exact(&t, &t, 11),
            Err(Error::ExactLimitExceeded { k: 11, limit: 10 })
        );
        assert!(expected_n(&t, &t, 16).is_err());
    }

    #[test]
    fn disjointness() {
        assert_eq!(common_fixed_point_disjoint_prob(0, 5, 9).unwrap(), q(1, 1));
        assert_eq!(common_fixed_point_disjoint_prob(1, 1, 3).unwrap(), q(2, 3));
        assert_eq!(common_fixed_point_disjoint_prob(3, 3, 5).unwrap(), q(0, 1));
    }

    #[test]
    fn two_cycle_collision_small() {
        // One transposition each in S_n: coincide with probability 1/C(n,2).
        assert_eq!(two_cycle_collision_exact(&ct("1^98,2"), &ct("1^98,2")).unwrap(), q(1, 4950));
        assert_eq!(two_cycle_collision_exact(&ct("1^4"), &ct("2^2")).unwrap(), q(0, 1));
        // (2^2) in S_4: a random conjugate of (1 2)(3 4) shares a 2-cycle iff
        // it is (1 2)(3 4) itself.
        assert_eq!(two_cycle_collision_exact(&ct("2^2"), &ct("2^2")).unwrap(), q(1, 3));
    }
}
