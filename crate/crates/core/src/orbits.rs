//! Orbits of `<p, q>` as connected components of the two functional graphs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Union by size with path halving, over `0..n`.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns the new root if they differed.
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        Some(ra)
    }

    /// Size of the class of `x`.
    pub fn class_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Classes as sorted 0-based point lists, ordered by smallest element.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }
}

pub(crate) fn check_pair(p: &Permutation, q: &Permutation) -> Result<usize> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(p.degree())
}

/// Union-find over both image arrays in one pass.
pub fn orbit_partition(p: &Permutation, q: &Permutation) -> Result<DisjointSets> {
    let n = check_pair(p, q)?;
    let mut ds = DisjointSets::new(n);
    let (pi, qi) = (p.images(), q.images());
    for x in 0..n {
        ds.union(x, pi[x] as usize);
        ds.union(x, qi[x] as usize);
    }
    Ok(ds)
}

pub fn is_transitive(p: &Permutation, q: &Permutation) -> Result<bool> {
    Ok(orbit_partition(p, q)?.components() == 1)
}

/// Counts of `<p, q>`-orbits by size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCensus {
    pub n: usize,
    /// `k -> N_k`
    pub counts: BTreeMap<usize, usize>,
    /// `N`: orbits of size at most `n/2`.
    pub small_orbit_total: usize,
    /// Orbits of size below `n^(1/3)` on which both generators restrict to
    /// fixed-point-free involutions.
    pub two_cycle_orbit_count: usize,
}

impl OrbitCensus {
    /// `N_k`
    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// `N_1 + ... + N_k`
    pub fn count_up_to(&self, k: usize) -> usize {
        self.counts.range(1..=k).map(|(_, &c)| c).sum()
    }

    pub fn orbit_count(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_count() == 1
    }

    /// Orbit sizes in ascending order, with multiplicity.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.counts
            .iter()
            .flat_map(|(&k, &c)| std::iter::repeat(k).take(c))
            .collect()
    }
}

pub fn orbit_census(p: &Permutation, q: &Permutation) -> Result<OrbitCensus> {
    let mut ds = orbit_partition(p, q)?;
    let n = ds.len();
    let (pi, qi) = (p.images(), q.images());
    // Per-root flag: every point is swapped (not fixed) by both generators.
    let mut involutive = vec![true; n];
    for x in 0..n {
        let (px, qx) = (pi[x] as usize, qi[x] as usize);
        let ok = px != x && pi[px] as usize == x && qx != x && qi[qx] as usize == x;
        if !ok {
            let r = ds.find(x);
            involutive[r] = false;
        }
    }
    let mut counts = BTreeMap::new();
    let mut small = 0;
    let mut two_cycle = 0;
    for x in 0..n {
        if ds.find(x) != x {
            continue;
        }
        let k = ds.class_size(x);
        *counts.entry(k).or_insert(0) += 1;
        if 2 * k <= n {
            small += 1;
        }
        if k * k * k < n && involutive[x] {
            two_cycle += 1;
        }
    }
    Ok(OrbitCensus {
        n,
        counts,
        small_orbit_total: small,
        two_cycle_orbit_count: two_cycle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, s: &str) -> Permutation {
        Permutation::parse_with_degree(s, n).unwrap()
    }

    #[test]
    fn census_examples() {
        let id = Permutation::identity(4);
        let c = orbit_census(&id, &id).unwrap();
        assert_eq!(c.count(1), 4);
        assert_eq!(c.small_orbit_total, 4);

        let a = perm(4, "(1 2)(3 4)");
        let b = perm(4, "(1 3)(2 4)");
        let c = orbit_census(&a, &b).unwrap();
        assert_eq!(c.orbit_sizes(), vec![4]);
        assert_eq!(c.small_orbit_total, 0);
        assert_eq!(c.two_cycle_orbit_count, 0);

        let c = orbit_census(&a, &a).unwrap();
        assert_eq!(c.count(2), 2);
        assert_eq!(c.small_orbit_total, 2);
        // 2^3 = 8 is not below 4
        assert_eq!(c.two_cycle_orbit_count, 0);
    }

    #[test]
    fn two_cycle_orbits_at_larger_n() {
        // On 30 points only {1,2} counts: {3,4,5,6} is all 2-cycles but too
        // large (4^3 >= 30), and {7,8} is fixed by q.
        let p = perm(30, "(1 2)(3 4)(5 6)(7 8)(9 10 11 12 13 14 15 16 17 18 19 20 21 22 23 24 25 26 27 28 29 30)");
        let q = perm(30, "(1 2)(4 5)(3 6)");
        let c = orbit_census(&p, &q).unwrap();
        assert_eq!(c.two_cycle_orbit_count, 1);
        assert_eq!(c.count(2), 2);
        assert_eq!(c.count(4), 1);
        assert_eq!(c.count(22), 1);
        assert_eq!(c.small_orbit_total, 3);
    }

    #[test]
    fn transitivity_examples() {
        let n = 6;
        let cyc = perm(n, "(1 2 3 4 5 6)");
        let id = Permutation::identity(n);
        assert!(is_transitive(&cyc, &id).unwrap());
        assert!(!is_transitive(&id, &id).unwrap());
        assert!(!is_transitive(&perm(4, "(1 2)"), &perm(4, "(3 4)")).unwrap());
        assert!(is_transitive(&Permutation::identity(1), &Permutation::identity(1)).unwrap());
        assert!(is_transitive(&id, &Permutation::identity(5)).is_err());
    }

    #[test]
    fn classes_listing() {
        let mut ds = orbit_partition(&perm(5, "(1 3)"), &perm(5, "(2 5)")).unwrap();
        assert_eq!(ds.classes(), vec![vec![0, 2], vec![1, 4], vec![3]]);
    }
}
