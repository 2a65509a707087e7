//! Product replacement: a cheap stream of nearly uniform elements of a
//! permutation group given by generators. Each step costs one multiplication.

use rand::Rng;

use crate::perm::Permutation;

const SLOTS: usize = 5;
const BURN_IN: usize = 30;

pub struct ProductReplacement {
    slots: Vec<Permutation>,
    accumulator: Permutation,
    scratch: Permutation,
}

impl ProductReplacement {
    /// Seeds the slots with the generators (repeated as needed) and runs a
    /// short burn-in.
    pub fn new<R: Rng + ?Sized>(generators: &[&Permutation], rng: &mut R) -> Self {
        assert!(!generators.is_empty());
        let slots: Vec<Permutation> = (0..SLOTS.max(generators.len()))
            .map(|i| generators[i % generators.len()].clone())
            .collect();
        let accumulator = Permutation::identity(generators[0].degree());
        let scratch = accumulator.clone();
        let mut pr = ProductReplacement {
            slots,
            accumulator,
            scratch,
        };
        for _ in 0..BURN_IN {
            pr.step(rng);
        }
        pr
    }

    /// Advances one step and returns the new element.
    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &Permutation {
        self.step(rng);
        &self.accumulator
    }

    fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let r = self.slots.len();
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = if rng.gen::<bool>() { (i, j) } else { (j, i) };
        Permutation::then_into(&self.slots[a], &self.slots[b], &mut self.scratch);
        std::mem::swap(&mut self.slots[i], &mut self.scratch);
        // "Rattle" accumulator, mixes faster than reading slots directly.
        Permutation::then_into(&self.accumulator, &self.slots[i], &mut self.scratch);
        std::mem::swap(&mut self.accumulator, &mut self.scratch);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RandomSource;
    use std::collections::HashSet;

    #[test]
    fn stays_inside_the_group_and_covers_it() {
        // <(1 2 3 4)> has 4 elements; every output must be one of them.
        let g = Permutation::parse_with_degree("(1 2 3 4)", 4).unwrap();
        let group: HashSet<Permutation> = (0..4).map(|e| g.pow(e)).collect();
        let mut rng = RandomSource::new(5, 0);
        let mut pr = ProductReplacement::new(&[&g, &g], &mut rng);
        let mut seen = HashSet::new();
        for _ in 0..200 {
            let x = pr.next(&mut rng).clone();
            assert!(group.contains(&x));
            seen.insert(x);
        }
        assert_eq!(seen.len(), 4);
    }
}
