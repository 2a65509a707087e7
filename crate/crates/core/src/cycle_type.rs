//! Cycle types (conjugacy classes of `S_n`) and their exact sizes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{factorial, pow_u};
use crate::perm::Permutation;

/// Sparse counts `j -> c_j` with `sum j * c_j = n`. Zero counts are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType {
    n: usize,
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn new(counts: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (j, c) in counts {
            if j == 0 {
                return Err(Error::InvalidCycleType("cycle length 0".into()));
            }
            if c > 0 {
                *map.entry(j).or_insert(0) += c;
            }
        }
        let n = map.iter().map(|(j, c)| j * c).sum();
        if n == 0 {
            return Err(Error::InvalidCycleType("empty type".into()));
        }
        Ok(CycleType { n, counts: map })
    }

    pub fn from_lengths(lengths: impl IntoIterator<Item = usize>) -> Result<Self> {
        CycleType::new(lengths.into_iter().map(|l| (l, 1)))
    }

    /// `(1^n)`, the identity class.
    pub fn identity(n: usize) -> Self {
        CycleType::new([(1, n)]).expect("n >= 1")
    }

    /// `(n^1)`, the n-cycles.
    pub fn full_cycle(n: usize) -> Self {
        CycleType::new([(n, 1)]).expect("n >= 1")
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `c_j`, zero if absent.
    pub fn count(&self, j: usize) -> usize {
        self.counts.get(&j).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn fixed_points(&self) -> usize {
        self.count(1)
    }

    pub fn two_cycles(&self) -> usize {
        self.count(2)
    }

    /// Total number of cycles `c`.
    pub fn total_cycles(&self) -> usize {
        self.counts.values().sum()
    }

    /// Sorted (ascending) multiset of cycle lengths.
    pub fn lengths(&self) -> Vec<usize> {
        self.counts
            .iter()
            .flat_map(|(&j, &c)| std::iter::repeat(j).take(c))
            .collect()
    }

    /// lcm of the cycle lengths present.
    pub fn order(&self) -> BigUint {
        self.counts
            .keys()
            .fold(BigUint::one(), |acc, &j| acc.lcm(&BigUint::from(j)))
    }

    /// `n! / prod_j j^{c_j} c_j!`: the number of permutations of this type.
    pub fn class_size(&self) -> BigUint {
        self.class_size_given(&factorial(self.n))
    }

    /// Centralizer order `prod_j j^{c_j} c_j!`.
    pub fn centralizer_order(&self) -> BigUint {
        self.counts
            .iter()
            .fold(BigUint::one(), |acc, (&j, &c)| {
                acc * pow_u(j as u64, c) * factorial(c)
            })
    }

    /// Class size with a caller-supplied `n!`, for batch computations.
    pub fn class_size_given(&self, n_factorial: &BigUint) -> BigUint {
        n_factorial / self.centralizer_order()
    }

    /// Canonical representative: cycles filled left to right with
    /// consecutive points, shortest cycles first.
    pub fn representative(&self) -> Permutation {
        let mut images = vec![0u32; self.n];
        let mut next = 0usize;
        for (&j, &c) in &self.counts {
            for _ in 0..c {
                for i in 0..j {
                    images[next + i] = (next + (i + 1) % j) as u32;
                }
                next += j;
            }
        }
        Permutation::from_images_unchecked(images)
    }

    /// Whether `other` is a sub-multiset of the cycles of `self`.
    pub fn contains(&self, other: &CycleType) -> bool {
        other.counts.iter().all(|(&j, &c)| self.count(j) >= c)
    }

    /// Removes the cycles of `other`; `None` if that leaves nothing or
    /// `other` is not contained.
    pub fn minus(&self, other: &CycleType) -> Option<CycleType> {
        if !self.contains(other) {
            return None;
        }
        let counts = self
            .counts
            .iter()
            .map(|(&j, &c)| (j, c - other.count(j)));
        CycleType::new(counts).ok()
    }

    /// Every sub-multiset of cycles (including `self`, excluding the empty one).
    pub fn sub_types(&self) -> Vec<CycleType> {
        let entries: Vec<(usize, usize)> = self.counts.iter().map(|(&j, &c)| (j, c)).collect();
        let mut out = Vec::new();
        let mut current = vec![0usize; entries.len()];
        loop {
            let mut i = 0;
            while i < entries.len() {
                if current[i] < entries[i].1 {
                    current[i] += 1;
                    break;
                }
                current[i] = 0;
                i += 1;
            }
            if i == entries.len() {
                break;
            }
            let t = CycleType::new(entries.iter().zip(&current).map(|(&(j, _), &d)| (j, d)))
                .expect("nonempty sub-type");
            out.push(t);
        }
        out
    }

    /// Parses `1^3,2^2,5` style text and checks the degree.
    pub fn parse_with_degree(s: &str, n: usize) -> Result<Self> {
        let t: CycleType = s.parse()?;
        if t.n != n {
            return Err(Error::InvalidCycleType(format!(
                "{s:?} has degree {}, expected {n}",
                t.n
            )));
        }
        Ok(t)
    }
}

impl FromStr for CycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut counts = Vec::new();
        for token in s.split(',').map(str::trim) {
            if token.is_empty() {
                return Err(Error::InvalidCycleType(format!("empty token in {s:?}")));
            }
            let (j, c) = match token.split_once('^') {
                Some((j, c)) => (j.trim(), c.trim()),
                None => (token, "1"),
            };
            let bad = || Error::InvalidCycleType(format!("bad token {token:?}"));
            let j: usize = j.parse().map_err(|_| bad())?;
            let c: usize = c.parse().map_err(|_| bad())?;
            if j == 0 {
                return Err(bad());
            }
            counts.push((j, c));
        }
        CycleType::new(counts)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (&j, &c)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if c == 1 {
                write!(f, "{j}")?;
            } else {
                write!(f, "{j}^{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycleType({self})")
    }
}

/// All cycle types of `S_n`, one per integer partition of `n`, in
/// lexicographic order of their ascending length lists.
pub fn all_cycle_types(n: usize) -> Vec<CycleType> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    partitions_rec(n, 1, &mut parts, &mut out);
    out
}

// Nondecreasing parts, each at least `min`, summing to `remaining`.
fn partitions_rec(remaining: usize, min: usize, parts: &mut Vec<usize>, out: &mut Vec<CycleType>) {
    if remaining == 0 {
        if !parts.is_empty() {
            out.push(CycleType::from_lengths(parts.iter().copied()).expect("nonempty"));
        }
        return;
    }
    for part in min..=remaining {
        if remaining - part != 0 && remaining - part < part {
            continue;
        }
        parts.push(part);
        partitions_rec(remaining - part, part, parts, out);
        parts.pop();
    }
}
