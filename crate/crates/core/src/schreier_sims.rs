//! Deterministic Schreier–Sims: base, strong generators and exact group
//! order. Used as the ground-truth oracle at small degree.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::orbits::check_pair;
use crate::perm::Permutation;

/// Default largest degree accepted by [`exact_order_oracle`].
pub const DEFAULT_ORACLE_LIMIT: usize = 12;

struct Level {
    base: usize,
    generators: Vec<Permutation>,
    /// `transversal[x]` maps the base point to `x`, for `x` in the orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut level = Level {
            base,
            generators: Vec::new(),
            transversal: vec![None; n],
            orbit: Vec::new(),
        };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        let n = self.transversal.len();
        self.transversal = vec![None; n];
        self.transversal[self.base] = Some(Permutation::identity(n));
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for g in &self.generators {
                let y = g.images()[x] as usize;
                if self.transversal[y].is_none() {
                    let u = self.transversal[x].as_ref().unwrap().then(g);
                    self.transversal[y] = Some(u);
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }
}

pub struct StabilizerChain {
    n: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(generators: &[&Permutation]) -> Self {
        let n = generators.first().map_or(0, |g| g.degree());
        let mut chain = StabilizerChain { n, levels: Vec::new() };
        let gens: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| (*g).clone())
            .collect();
        if gens.is_empty() {
            return chain;
        }
        for g in &gens {
            if chain.levels.iter().all(|l| g.images()[l.base] as usize == l.base) {
                let moved = (0..n).find(|&x| g.images()[x] as usize != x).unwrap();
                chain.levels.push(Level::new(moved, n));
            }
        }
        for g in &gens {
            for level in chain.levels.iter_mut() {
                level.generators.push(g.clone());
                if g.images()[level.base] as usize != level.base {
                    break;
                }
            }
        }
        for level in chain.levels.iter_mut() {
            level.rebuild_orbit();
        }
        chain.complete();
        chain
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// where stripping stopped (`levels.len()` if it passed every level).
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let x = g.images()[level.base] as usize;
            match &level.transversal[x] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut restart = None;
            'search: for oi in 0..self.levels[li].orbit.len() {
                let x = self.levels[li].orbit[oi];
                for gi in 0..self.levels[li].generators.len() {
                    let level = &self.levels[li];
                    let g = &level.generators[gi];
                    let y = g.images()[x] as usize;
                    let ux = level.transversal[x].as_ref().unwrap();
                    let uy = level.transversal[y].as_ref().unwrap();
                    let schreier = ux.then(g).then(&uy.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = self.sift(schreier, li + 1);
                    if h.is_identity() {
                        continue;
                    }
                    if j == self.levels.len() {
                        let moved = (0..self.n).find(|&z| h.images()[z] as usize != z).unwrap();
                        self.levels.push(Level::new(moved, self.n));
                    }
                    for l in li + 1..=j {
                        self.levels[l].generators.push(h.clone());
                        self.levels[l].rebuild_orbit();
                    }
                    restart = Some(j);
                    break 'search;
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * l.orbit.len())
    }

    /// 1-based base points.
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base + 1).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && self.sift(g.clone(), 0).0.is_identity()
    }
}

/// Exact `|<p, q>|` for degrees up to `limit`.
pub fn exact_order_oracle(p: &Permutation, q: &Permutation, limit: usize) -> Result<BigUint> {
    let n = check_pair(p, q)?;
    if n > limit {
        return Err(Error::OracleLimitExceeded { n, limit });
    }
    Ok(StabilizerChain::new(&[p, q]).order())
}
