//! Transitive pairs with prescribed cycle types, and the 2-regular case
//! `p(k)` through the matchings bijection.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::cycle_type::CycleType;
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, pow_u, ratio, BigRational};
use crate::perm::Permutation;

/// Probability that two uniform elements of type `(2^k)` in `S_{2k}`
/// generate a transitive group: `4^k k!^2 / (2k (2k)!)`.
pub fn p_two_regular(k: usize) -> BigRational {
    assert!(k >= 1, "p(k) needs k >= 1");
    let kf = factorial(k);
    let num = pow_u(4, k) * &kf * &kf;
    let den = BigUint::from(2 * k) * factorial(2 * k);
    ratio(num, den)
}

fn check_fixed_point_free_involution(s: &Permutation) -> Result<()> {
    let ok = s.degree() % 2 == 0
        && s.images()
            .iter()
            .enumerate()
            .all(|(x, &y)| y as usize != x && s.images()[y as usize] as usize == x);
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{s} is not of type (2^k)")))
    }
}

/// Walks `x, x^s, x^{s s2}, ...` from the smallest point not yet placed,
/// closing each walk into a cycle of the result.
pub fn matchings_to_even(s: &Permutation, s2: &Permutation) -> Result<Permutation> {
    if s.degree() != s2.degree() {
        return Err(Error::DegreeMismatch(s.degree(), s2.degree()));
    }
    check_fixed_point_free_involution(s)?;
    check_fixed_point_free_involution(s2)?;
    let n = s.degree();
    let (a, b) = (s.images(), s2.images());
    let mut images = vec![u32::MAX; n];
    for start in 0..n {
        if images[start] != u32::MAX {
            continue;
        }
        let mut x = start;
        let mut use_first = true;
        loop {
            let y = if use_first { a[x] } else { b[x] } as usize;
            images[x] = y as u32;
            use_first = !use_first;
            x = y;
            if x == start {
                break;
            }
        }
    }
    Ok(Permutation::from_images_unchecked(images))
}

/// Inverse of [`matchings_to_even`]: along each cycle of `t`, starting at
/// its smallest point, edges alternate between the two matchings.
pub fn even_to_matchings(t: &Permutation) -> Result<(Permutation, Permutation)> {
    let n = t.degree();
    let mut s = vec![u32::MAX; n];
    let mut s2 = vec![u32::MAX; n];
    for cycle in t.cycles() {
        if cycle.len() % 2 != 0 {
            return Err(Error::Precondition(format!("{t} has an odd cycle")));
        }
        for (i, &x) in cycle.iter().enumerate() {
            let (x, y) = (x - 1, cycle[(i + 1) % cycle.len()] - 1);
            let target = if i % 2 == 0 { &mut s } else { &mut s2 };
            target[x] = y as u32;
            target[y] = x as u32;
        }
    }
    Ok((
        Permutation::from_images_unchecked(s),
        Permutation::from_images_unchecked(s2),
    ))
}

/// Memoized counts `t(C, C')` of ordered transitive pairs with types `C`, `C'`.
///
/// Conditioning on the orbit of a marked point, all `|C| |C'|` pairs split as
/// `sum_s C(l-1, s-1) sum_{D, D'} t(D, D') |C - D| |C' - D'|` over sub-types of
/// size `s`; the `s = l` term is `t(C, C')` itself.
#[derive(Default)]
pub struct TransitivePairCounter {
    memo: HashMap<(CycleType, CycleType), BigUint>,
    class_sizes: HashMap<CycleType, BigUint>,
}

impl TransitivePairCounter {
    pub fn new() -> Self {
        Self::default()
    }

    fn class_size(&mut self, t: &CycleType) -> BigUint {
        self.class_sizes
            .entry(t.clone())
            .or_insert_with(|| t.class_size())
            .clone()
    }

    pub fn count(&mut self, c: &CycleType, c2: &CycleType) -> Result<BigUint> {
        let l = c.degree();
        if c2.degree() != l {
            return Err(Error::DegreeMismatch(l, c2.degree()));
        }
        Ok(self.count_inner(c, c2))
    }

    fn count_inner(&mut self, c: &CycleType, c2: &CycleType) -> BigUint {
        let l = c.degree();
        // A transitive group on l points needs c + c' <= l + 1 cycles.
        if c.total_cycles() + c2.total_cycles() > l + 1 {
            return BigUint::zero();
        }
        let key = if c <= c2 {
            (c.clone(), c2.clone())
        } else {
            (c2.clone(), c.clone())
        };
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut subs: HashMap<usize, Vec<CycleType>> = HashMap::new();
        for d in c.sub_types() {
            if d.degree() < l {
                subs.entry(d.degree()).or_default().push(d);
            }
        }
        let mut subs2: HashMap<usize, Vec<CycleType>> = HashMap::new();
        for d in c2.sub_types() {
            if d.degree() < l {
                subs2.entry(d.degree()).or_default().push(d);
            }
        }
        let mut rest = BigUint::zero();
        for s in 1..l {
            let (Some(ds), Some(ds2)) = (subs.get(&s), subs2.get(&s)) else {
                continue;
            };
            let mut inner = BigUint::zero();
            for d in ds {
                let outside = self.class_size(&c.minus(d).expect("proper sub-type"));
                for d2 in ds2 {
                    let t = self.count_inner(d, d2);
                    if t.is_zero() {
                        continue;
                    }
                    let outside2 = self.class_size(&c2.minus(d2).expect("proper sub-type"));
                    inner += t * &outside * outside2;
                }
            }
            rest += binomial(l - 1, s - 1) * inner;
        }
        let total = self.class_size(c) * self.class_size(c2);
        let value = total - rest;
        self.memo.insert(key, value.clone());
        value
    }

    /// `p(D; D')`: the transitive fraction of all pairs with these types.
    pub fn probability(&mut self, d: &CycleType, d2: &CycleType) -> Result<BigRational> {
        let t = self.count(d, d2)?;
        let den = self.class_size(d) * self.class_size(d2);
        Ok(ratio(t, den))
    }
}

pub fn transitive_pair_count(d: &CycleType, d2: &CycleType) -> Result<BigUint> {
    TransitivePairCounter::new().count(d, d2)
}

pub fn p_of_types(d: &CycleType, d2: &CycleType) -> Result<BigRational> {
    TransitivePairCounter::new().probability(d, d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::is_transitive;

    fn perm(n: usize, s: &str) -> Permutation {
        Permutation::parse_with_degree(s, n).unwrap()
    }

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(p_two_regular(1), ratio(1u32.into(), 1u32.into()));
        assert_eq!(p_two_regular(2), ratio(2u32.into(), 3u32.into()));
        assert_eq!(p_two_regular(3), ratio(8u32.into(), 15u32.into()));
    }

    #[test]
    fn bijection_example() {
        let s = perm(4, "(1 2)(3 4)");
        let s2 = perm(4, "(1 3)(2 4)");
        let t = matchings_to_even(&s, &s2).unwrap();
        assert_eq!(t, perm(4, "(1 2 4 3)"));
        assert_eq!(even_to_matchings(&t).unwrap(), (s.clone(), s2));
        let one = perm(2, "(1 2)");
        assert_eq!(matchings_to_even(&one, &one).unwrap(), one);
        assert!(matchings_to_even(&perm(4, "(1 2)"), &s).is_err());
        assert!(even_to_matchings(&perm(4, "(1 2 3)")).is_err());
    }

    #[test]
    fn counts_from_examples() {
        assert_eq!(transitive_pair_count(&ct("1"), &ct("1")).unwrap(), 1u32.into());
        assert_eq!(transitive_pair_count(&ct("2"), &ct("2")).unwrap(), 1u32.into());
        assert_eq!(transitive_pair_count(&ct("2^2"), &ct("2^2")).unwrap(), 6u32.into());
        assert_eq!(transitive_pair_count(&ct("1^2"), &ct("1^2")).unwrap(), 0u32.into());
        // Every pair with an n-cycle is transitive.
        assert_eq!(
            transitive_pair_count(&ct("5"), &ct("1,2^2")).unwrap(),
            ct("5").class_size() * ct("1,2^2").class_size()
        );
    }

    #[test]
    fn recursion_matches_brute_force_up_to_five() {
        use crate::cycle_type::all_cycle_types;
        let mut counter = TransitivePairCounter::new();
        for l in 1..=5 {
            let perms = all_perms(l);
            for c in all_cycle_types(l) {
                for c2 in all_cycle_types(l) {
                    let want = perms
                        .iter()
                        .filter(|p| p.cycle_type() == c)
                        .flat_map(|p| perms.iter().filter(|q| q.cycle_type() == c2).map(move |q| (p, q)))
                        .filter(|(p, q)| is_transitive(p, q).unwrap())
                        .count();
                    assert_eq!(counter.count(&c, &c2).unwrap(), BigUint::from(want), "{c} {c2}");
                }
            }
        }
    }

    fn all_perms(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        heap_permute(n, &mut cur, &mut out);
        out
    }

    fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if k <= 1 {
            out.push(Permutation::from_one_line(a).unwrap());
            return;
        }
        heap_permute(k - 1, a, out);
        for i in 0..k - 1 {
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap_permute(k - 1, a, out);
        }
    }
}
