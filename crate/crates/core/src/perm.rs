//! Permutations of `{1, ..., n}`.
//!
//! Storage is 0-based (`images[i]` is the image of point `i + 1`, minus one);
//! every textual interface and every point argument on the public API is
//! 1-based. Composition acts on the right: `x^(pq) = (x^p)^q`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cycle_type::CycleType;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "images are not a bijection on {n} points"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Unchecked constructor for callers that build a bijection by construction.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// One-line notation with 1-based images: `[2, 1, 4, 3]`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let mut v = Vec::with_capacity(images.len());
        for &x in images {
            if x == 0 {
                return Err(Error::InvalidPermutation("points are 1-based".into()));
            }
            v.push((x - 1) as u32);
        }
        Permutation::from_images(v)
    }

    /// Disjoint cycles over 1-based points on a ground set of size `n`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} outside 1..={n}"
                    )));
                }
                if touched[x - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} appears twice"
                    )));
                }
                touched[x - 1] = true;
                let y = cycle[(i + 1) % cycle.len()];
                images[x - 1] = (y - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image table.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    /// `self * other`: apply `self`, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(self.then(other))
    }

    /// Writes `a * b` into `out`, reusing its buffer.
    pub(crate) fn then_into(a: &Permutation, b: &Permutation, out: &mut Permutation) {
        let q = &b.images;
        out.images.clear();
        out.images.extend(a.images.iter().map(|&x| q[x as usize]));
    }

    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        let q = &other.images;
        Permutation {
            images: self.images.iter().map(|&x| q[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `s^-1 * self * s`. Relabels each cycle of `self` through `s`.
    pub fn conjugate(&self, s: &Permutation) -> Result<Permutation> {
        self.check_degree(s)?;
        let mut out = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            out[s.images[i] as usize] = s.images[x as usize];
        }
        Ok(Permutation { images: out })
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Cycles as 1-based point lists, each starting at its smallest point,
    /// ordered by that point. Fixed points are included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_cycle(|start, len| {
            let mut cycle = Vec::with_capacity(len);
            let mut x = start;
            for _ in 0..len {
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
            true
        });
        out
    }

    /// Multiset of cycle lengths in order of first appearance.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_cycle(|_, len| {
            out.push(len);
            true
        });
        out
    }

    /// Calls `f(start, len)` for each cycle until it returns `false`;
    /// `start` is the cycle's smallest 0-based point. Visited points live in
    /// a bitset, which stays cache-resident far longer than the image array.
    pub(crate) fn for_each_cycle(&self, mut f: impl FnMut(usize, usize) -> bool) {
        let n = self.degree();
        let mut seen = vec![0u64; n.div_ceil(64)];
        for start in 0..n {
            if seen[start / 64] >> (start % 64) & 1 == 1 {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            loop {
                seen[x / 64] |= 1 << (x % 64);
                len += 1;
                x = self.images[x] as usize;
                if x == start {
                    break;
                }
            }
            if !f(start, len) {
                return;
            }
        }
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(self.cycle_lengths())
            .expect("cycle lengths of a permutation always form a valid type")
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_lengths().len()
    }

    pub fn parity(&self) -> Parity {
        if (self.degree() - self.cycle_count()) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn order(&self) -> BigUint {
        let mut lengths = self.cycle_lengths();
        lengths.sort_unstable();
        lengths.dedup();
        lengths
            .into_iter()
            .fold(BigUint::one(), |acc, l| acc.lcm(&BigUint::from(l)))
    }

    /// 1-based fixed points.
    pub fn fixed_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i == x as usize)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Parses one-line or cycle notation against a known degree. Cycle
    /// notation may omit fixed points; one-line notation must list all `n`.
    pub fn parse_with_degree(s: &str, n: usize) -> Result<Permutation> {
        let s = s.trim();
        if s.starts_with('(') {
            let cycles = parse_cycles(s)?;
            Permutation::from_cycles(n, &cycles)
        } else {
            let p: Permutation = s.parse()?;
            if p.degree() != n {
                return Err(Error::DegreeMismatch(p.degree(), n));
            }
            Ok(p)
        }
    }
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::InvalidPermutation(format!("expected '(' in {s:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in {s:?}")))?;
        let cycle = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad point {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

impl FromStr for Permutation {
    type Err = Error;

    /// One-line notation (`2 1 4 3`) or cycle notation (`(1 2)(3 4)`); for
    /// cycle notation the degree is the largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('(') {
            let cycles = parse_cycles(s)?;
            let n = cycles.iter().flatten().copied().max().unwrap_or(0);
            Permutation::from_cycles(n, &cycles)
        } else {
            let images = s
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad image {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Permutation::from_one_line(&images)
        }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            any = true;
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}
