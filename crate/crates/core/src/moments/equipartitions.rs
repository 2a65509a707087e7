//! Partitions of the points into `k` cells of size `n/k` that a permutation
//! maps to themselves.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exact::{factorial, pow_u};
use crate::perm::Permutation;

pub const DEFAULT_EQUIPARTITION_LIMIT: usize = 12;

/// `|X_k| = n! / (k! (n/k)!^k)`.
pub fn equipartition_count(n: usize, k: usize) -> Result<BigUint> {
    check_divides(n, k)?;
    let m = n / k;
    Ok(factorial(n) / (factorial(k) * num_traits::pow(factorial(m), k)))
}

fn check_divides(n: usize, k: usize) -> Result<()> {
    if k == 0 || n % k != 0 {
        return Err(Error::Precondition(format!("{k} does not divide {n}")));
    }
    Ok(())
}

struct Search<'a> {
    images: &'a [u32],
    m: usize,
    /// Cell index of each point, `usize::MAX` if unassigned.
    cell_of: Vec<usize>,
    cells: Vec<Vec<usize>>,
    count: u64,
}

impl Search<'_> {
    // A completed cell must map onto a completed cell or entirely into
    // unassigned points; otherwise no completion can be invariant.
    fn image_ok(&self, cell: &[usize]) -> bool {
        let first = self.cell_of[self.images[cell[0]] as usize];
        cell.iter()
            .all(|&x| self.cell_of[self.images[x] as usize] == first)
            && (first == usize::MAX || self.cells[first].len() == self.m)
    }

    fn invariant(&self) -> bool {
        self.cells.iter().all(|cell| self.image_ok(cell))
    }

    fn place(&mut self, cell: usize, next_min: usize) {
        if self.cells[cell].len() == self.m {
            if !self.cells.iter().filter(|c| c.len() == self.m).all(|c| self.image_ok(c)) {
                return;
            }
            return self.open_cell();
        }
        let n = self.cell_of.len();
        for x in next_min..n {
            if self.cell_of[x] != usize::MAX {
                continue;
            }
            self.cell_of[x] = cell;
            self.cells[cell].push(x);
            self.place(cell, x + 1);
            self.cells[cell].pop();
            self.cell_of[x] = usize::MAX;
        }
    }

    // Each new cell starts at the smallest unassigned point.
    fn open_cell(&mut self) {
        let Some(start) = self.cell_of.iter().position(|&c| c == usize::MAX) else {
            if self.invariant() {
                self.count += 1;
            }
            return;
        };
        let cell = self.cells.len();
        self.cells.push(vec![start]);
        self.cell_of[start] = cell;
        self.place(cell, start + 1);
        self.cell_of[start] = usize::MAX;
        self.cells.pop();
    }
}

/// Number of `k`-cell equipartitions preserved by `p`, by pruned enumeration.
pub fn count_invariant_equipartitions(p: &Permutation, k: usize) -> Result<BigUint> {
    count_invariant_equipartitions_with_limit(p, k, DEFAULT_EQUIPARTITION_LIMIT)
}

pub fn count_invariant_equipartitions_with_limit(
    p: &Permutation,
    k: usize,
    limit: usize,
) -> Result<BigUint> {
    let n = p.degree();
    if n > limit {
        return Err(Error::OracleLimitExceeded { n, limit });
    }
    check_divides(n, k)?;
    let mut search = Search {
        images: p.images(),
        m: n / k,
        cell_of: vec![usize::MAX; n],
        cells: Vec::new(),
        count: 0,
    };
    search.open_cell();
    Ok(BigUint::from(search.count))
}

/// The bound `k^c`, `c` the number of cycles of `p`.
pub fn equipartition_bound(p: &Permutation, k: usize) -> BigUint {
    pow_u(k as u64, p.cycle_count())
}
