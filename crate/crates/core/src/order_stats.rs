//! Fixed points and 2-cycles of a uniform element of order `m`, and the
//! arithmetic conditions on `m` under which such pairs generate.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::cycle_type::CycleType;
use crate::error::{Error, Result};
use crate::exact::{pow_u, ratio, BigRational};
use crate::moments::RationalValue;
use crate::sampling::enumerate_types_of_order;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub c1: usize,
    pub c2: usize,
    pub weight: BigUint,
}

/// Joint law of `(c_1, c_2)` over the elements of order `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderMProfile {
    pub n: usize,
    pub m: u64,
    /// Sorted by `(c1, c2)`.
    pub rows: Vec<ProfileRow>,
    pub total: BigUint,
}

impl OrderMProfile {
    pub fn probability(&self, row: &ProfileRow) -> BigRational {
        ratio(row.weight.clone(), self.total.clone())
    }

    /// Exact mean number of fixed points.
    pub fn mean_fixed_points(&self) -> BigRational {
        let s: BigUint = self.rows.iter().map(|r| &r.weight * r.c1).sum();
        ratio(s, self.total.clone())
    }

    pub fn mean_two_cycles(&self) -> BigRational {
        let s: BigUint = self.rows.iter().map(|r| &r.weight * r.c2).sum();
        ratio(s, self.total.clone())
    }

    /// Probability mass of the rows selected by `pred`.
    pub fn mass_where(&self, pred: impl Fn(&ProfileRow) -> bool) -> BigRational {
        let s: BigUint = self.rows.iter().filter(|r| pred(r)).map(|r| &r.weight).sum();
        ratio(s, self.total.clone())
    }

    /// Columns `c1,c2,weight,probability_numerator,probability_denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("c1,c2,weight,probability_numerator,probability_denominator\n");
        for r in &self.rows {
            let p = self.probability(r);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.c1,
                r.c2,
                r.weight,
                p.numer(),
                p.denom()
            ));
        }
        out
    }
}

pub fn order_m_profile(n: usize, m: u64) -> Result<OrderMProfile> {
    let table = enumerate_types_of_order(n, m);
    if table.is_empty() {
        return Err(Error::EmptyOrder { n, m });
    }
    let mut agg: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
    for (t, w) in &table.entries {
        *agg.entry((t.fixed_points(), t.two_cycles())).or_default() += w;
    }
    Ok(OrderMProfile {
        n,
        m,
        rows: agg
            .into_iter()
            .map(|((c1, c2), weight)| ProfileRow { c1, c2, weight })
            .collect(),
        total: table.total,
    })
}

/// `t` with `k d` fixed points turned into `k` extra `d`-cycles.
pub fn shift_fixed_points(t: &CycleType, d: usize, k: usize) -> Result<CycleType> {
    let c1 = t.fixed_points();
    if k == 0 || d < 2 || d > t.degree() || c1 < 2 * k * d {
        return Err(Error::Precondition(format!(
            "need k >= 1, 2 <= d <= n and c_1 >= 2kd; got c_1 = {c1}, d = {d}, k = {k}"
        )));
    }
    let mut counts: Vec<(usize, usize)> = t.counts().iter().map(|(&j, &c)| (j, c)).collect();
    for (j, c) in counts.iter_mut() {
        if *j == 1 {
            *c -= k * d;
        }
    }
    counts.push((d, k));
    CycleType::new(counts)
}

/// `|C| / |C'|` where `C'` replaces `k d` fixed points of `C` by `k` `d`-cycles.
pub fn class_ratio(t: &CycleType, d: usize, k: usize) -> Result<BigRational> {
    let t2 = shift_fixed_points(t, d, k)?;
    Ok(ratio(t.class_size(), t2.class_size()))
}

/// The two upper bounds on [`class_ratio`]:
/// `(c_d + k)^k d^k / (kd)^{kd}` and `(n / (kd)^d)^k`.
pub fn class_ratio_bounds(t: &CycleType, d: usize, k: usize) -> Result<(BigRational, BigRational)> {
    shift_fixed_points(t, d, k)?;
    let n = t.degree();
    let kd = (k * d) as u64;
    let first = ratio(
        pow_u((t.count(d) + k) as u64, k) * pow_u(d as u64, k),
        pow_u(kd, k * d as usize),
    );
    let second = ratio(pow_u(n as u64, k), pow_u(kd, d * k));
    Ok((first, second))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Fixed points count as few when at most `fix_coeff * sqrt(n)`; also
    /// the upper end of the small-divisor range.
    pub fix_coeff: f64,
    /// 2-cycles count as few when at most `twocycle_frac * n`.
    pub twocycle_frac: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            fix_coeff: 1.0,
            twocycle_frac: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominantClass {
    #[serde(rename = "type")]
    pub cycle_type: String,
    pub probability: RationalValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationHypothesisReport {
    pub n: usize,
    pub m: u64,
    pub thresholds: Thresholds,
    pub fixed_point_cap: f64,
    pub two_cycle_cap: f64,
    /// Smallest divisor `d` of `m` with `3 <= d <= fixed_point_cap`.
    pub small_divisor: Option<u64>,
    /// Some order-`m` type has few fixed points and few 2-cycles.
    pub sparse_type_exists: bool,
    /// Some order-`m` type has few fixed points.
    pub few_fixed_type_exists: bool,
    pub mass_many_fixed_points: RationalValue,
    pub mass_many_two_cycles: RationalValue,
    pub mass_violating_either: RationalValue,
    pub dominant_class: DominantClass,
    /// Sufficient conditions for almost-sure generation that hold here.
    pub almost_sure_conditions: Vec<String>,
    /// Conditions characterizing generation with probability bounded
    /// away from zero that hold here.
    pub positive_probability_conditions: Vec<String>,
    /// Notes on special cases, e.g. `m = 2`.
    pub notes: Vec<String>,
}

impl GenerationHypothesisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

pub fn check_generation_hypotheses(
    n: usize,
    m: u64,
    thresholds: Thresholds,
) -> Result<GenerationHypothesisReport> {
    let table = enumerate_types_of_order(n, m);
    if table.is_empty() {
        return Err(Error::EmptyOrder { n, m });
    }
    let profile = order_m_profile(n, m)?;
    let fix_cap = thresholds.fix_coeff * (n as f64).sqrt();
    let two_cap = thresholds.twocycle_frac * n as f64;
    let many_fixed = |c1: usize| c1 as f64 > fix_cap;
    let many_two = |c2: usize| c2 as f64 > two_cap;

    let small_divisor = (3..=m)
        .take_while(|&d| d as f64 <= fix_cap)
        .find(|&d| m % d == 0);
    let sparse_type_exists = profile.rows.iter().any(|r| !many_fixed(r.c1) && !many_two(r.c2));
    let few_fixed_type_exists = profile.rows.iter().any(|r| !many_fixed(r.c1));
    let (dom_t, dom_w) = table
        .entries
        .iter()
        .max_by(|a, b| a.1.cmp(&b.1))
        .expect("nonempty table");
    let dominant_class = DominantClass {
        cycle_type: dom_t.to_string(),
        probability: RationalValue::from(&ratio(dom_w.clone(), table.total.clone())),
    };

    let mut almost_sure = Vec::new();
    if let Some(d) = small_divisor {
        almost_sure.push(format!("divisor {d} of m lies in [3, fix_coeff*sqrt(n)]"));
    }
    if m % 2 == 0 && sparse_type_exists {
        almost_sure.push("m even and some order-m type has few fixed points and few 2-cycles".into());
    }
    let mut positive = Vec::new();
    if m % 2 == 1 && few_fixed_type_exists {
        positive.push("m odd and some order-m type has at most fix_coeff*sqrt(n) fixed points".into());
    }
    if m % 2 == 0 && m != 2 {
        positive.push("m even and not 2".into());
    }
    let mut notes = Vec::new();
    if m == 2 {
        notes.push(
            "m = 2: two involutions generate a dihedral group, never A_n for n >= 4".into(),
        );
    }
    if m == 1 {
        notes.push("m = 1: only the identity".into());
    }

    Ok(GenerationHypothesisReport {
        n,
        m,
        thresholds,
        fixed_point_cap: fix_cap,
        two_cycle_cap: two_cap,
        small_divisor,
        sparse_type_exists,
        few_fixed_type_exists,
        mass_many_fixed_points: (&profile.mass_where(|r| many_fixed(r.c1))).into(),
        mass_many_two_cycles: (&profile.mass_where(|r| many_two(r.c2))).into(),
        mass_violating_either: (&profile.mass_where(|r| many_fixed(r.c1) || many_two(r.c2))).into(),
        dominant_class,
        almost_sure_conditions: almost_sure,
        positive_probability_conditions: positive,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational_to_f64;

    fn rows(p: &OrderMProfile) -> Vec<(usize, usize, u64)> {
        p.rows
            .iter()
            .map(|r| (r.c1, r.c2, (&r.weight).try_into().unwrap()))
            .collect()
    }

    #[test]
    fn profiles_from_examples() {
        assert_eq!(rows(&order_m_profile(4, 2).unwrap()), vec![(0, 2, 3), (2, 1, 6)]);
        assert_eq!(rows(&order_m_profile(5, 6).unwrap()), vec![(0, 1, 20)]);
        assert_eq!(rows(&order_m_profile(6, 6).unwrap()), vec![(0, 0, 120), (1, 1, 120)]);
        assert_eq!(order_m_profile(3, 4), Err(Error::EmptyOrder { n: 3, m: 4 }));
        let csv = order_m_profile(4, 2).unwrap().to_csv();
        assert_eq!(
            csv,
            "c1,c2,weight,probability_numerator,probability_denominator\n0,2,3,1,3\n2,1,6,2,3\n"
        );
    }

    #[test]
    fn ratio_example() {
        let t = CycleType::identity(10);
        assert_eq!(class_ratio(&t, 2, 1).unwrap(), ratio(1u32.into(), 45u32.into()));
        assert!(class_ratio(&t, 2, 3).is_err());
        assert!(class_ratio(&t, 1, 1).is_err());
        let (b1, b2) = class_ratio_bounds(&t, 2, 1).unwrap();
        let r = class_ratio(&t, 2, 1).unwrap();
        assert!(r <= b1 && b1 <= b2);
    }

    #[test]
    fn involution_mean_fixed_points() {
        let p = order_m_profile(100, 2).unwrap();
        let mean = rational_to_f64(&p.mean_fixed_points());
        assert!(mean > 8.0 && mean < 13.0, "{mean}");
    }

    #[test]
    fn hypotheses() {
        let r = check_generation_hypotheses(100, 6, Thresholds::default()).unwrap();
        assert_eq!(r.small_divisor, Some(3));
        assert!(!r.almost_sure_conditions.is_empty());

        let r = check_generation_hypotheses(4, 2, Thresholds::default()).unwrap();
        assert!(r.notes.iter().any(|s| s.starts_with("m = 2")));
        assert!(r.positive_probability_conditions.is_empty());

        // n = pq + p - 1 with p = 5, q = 7: the 35-cycles dominate.
        let r = check_generation_hypotheses(39, 35, Thresholds::default()).unwrap();
        assert_eq!(r.dominant_class.cycle_type, "1^4,35");
        assert!(r.dominant_class.probability.value > 0.99);
        assert!(check_generation_hypotheses(3, 4, Thresholds::default()).is_err());
    }
}
