//! Block systems and primitivity of transitive groups `<p, q>`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{factorize, smallest_prime_factor};
use crate::orbits::{check_pair, is_transitive, DisjointSets};
use crate::perm::Permutation;
use crate::random_elements::ProductReplacement;
use crate::sampling::RandomSource;

/// A nontrivial invariant partition; blocks hold sorted 1-based points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSystem {
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    /// Whether every generator maps blocks onto blocks.
    pub fn is_invariant_under(&self, g: &Permutation) -> bool {
        let n = g.degree();
        let mut block_of = vec![usize::MAX; n + 1];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                block_of[x] = i;
            }
        }
        self.blocks.iter().all(|b| {
            let target = block_of[g.apply(b[0])];
            b.iter().all(|&x| block_of[g.apply(x)] == target)
        })
    }
}

/// Finest invariant partition joining 0-based points `a` and `b`
/// (Atkinson's refinement). Gives up with `None` as soon as a class grows
/// past `max_block`: every class of the final partition then has that size
/// or more, so no nontrivial system can result.
fn minimal_blocks(generators: &[&Permutation], a: usize, b: usize, max_block: usize) -> Option<DisjointSets> {
    let n = generators[0].degree();
    let mut ds = DisjointSets::new(n);
    let mut queue = Vec::new();
    if ds.union(a, b).is_some() {
        queue.push((a, b));
    }
    while let Some((x, y)) = queue.pop() {
        for g in generators {
            let img = g.images();
            let (u, v) = (img[x] as usize, img[y] as usize);
            let (ru, rv) = (ds.find(u), ds.find(v));
            if ru != rv {
                let root = ds.union(ru, rv).expect("distinct roots");
                if ds.class_size(root) > max_block {
                    return None;
                }
                queue.push((ru, rv));
            }
        }
    }
    Some(ds)
}

fn system_from(ds: &mut DisjointSets) -> BlockSystem {
    let blocks = ds
        .classes()
        .into_iter()
        .map(|c| c.into_iter().map(|x| x + 1).collect())
        .collect();
    BlockSystem { blocks }
}

/// The smallest block of `<p, q>` containing both 1-based points.
pub fn minimal_block_containing(
    p: &Permutation,
    q: &Permutation,
    pair: (usize, usize),
) -> Result<Vec<usize>> {
    let n = check_pair(p, q)?;
    let (a, b) = pair;
    if a == 0 || b == 0 || a > n || b > n {
        return Err(Error::Precondition(format!("points {pair:?} outside 1..={n}")));
    }
    if !is_transitive(p, q)? {
        return Err(Error::NotTransitive);
    }
    let mut ds = minimal_blocks(&[p, q], a - 1, b - 1, n).expect("no class exceeds n");
    let root = ds.find(a - 1);
    Ok((0..n).filter(|&x| ds.find(x) == root).map(|x| x + 1).collect())
}

pub fn is_primitive(p: &Permutation, q: &Permutation) -> Result<bool> {
    Ok(find_block_system(p, q)?.is_none())
}

/// A nontrivial block system of the transitive group `<p, q>`, or `None` if
/// it is primitive.
///
/// Rather than refining from every pair `(1, x)`, this looks for an element
/// `g` with a cycle of length `L` exceeding the largest possible number of
/// blocks `n / spf(n)`. If `B` is a block through a point `x0` on that cycle,
/// its period under `g` is some proper divisor `l` of `L`, so `x0^(g^(L/r))`
/// lies in `B` for any prime `r` with `l | L/r`. Refining from those few
/// pairs is therefore conclusive. Falls back to all pairs when no such
/// element turns up.
pub fn find_block_system(p: &Permutation, q: &Permutation) -> Result<Option<BlockSystem>> {
    check_pair(p, q)?;
    if !is_transitive(p, q)? {
        return Err(Error::NotTransitive);
    }
    Ok(block_system_of_transitive(p, q))
}

/// [`find_block_system`] without the transitivity check.
pub(crate) fn block_system_of_transitive(p: &Permutation, q: &Permutation) -> Option<BlockSystem> {
    let n = p.degree();
    // n = 1, or prime degree: no nontrivial partition into equal cells.
    let spf = smallest_prime_factor(n as u64)? as usize;
    if spf == n {
        return None;
    }
    // Bounds both the number of blocks and their size.
    let max_block = n / spf;
    let gens = [p, q];

    if let Some(cycle) = long_cycle(p, q, max_block) {
        let len = cycle.len();
        let primes: Vec<usize> = factorize(len as u64)
            .into_iter()
            .map(|(r, _)| r as usize)
            .filter(|&r| period_possible(len / r, len, max_block))
            .collect();
        // Independent refinements; the first prime in order wins.
        return primes
            .par_iter()
            .find_map_first(|&r| minimal_blocks(&gens, cycle[0], cycle[len / r], max_block))
            .map(|mut ds| system_from(&mut ds));
    }

    (1..n)
        .find_map(|x| minimal_blocks(&gens, 0, x, max_block))
        .map(|mut ds| system_from(&mut ds))
}

// Whether some divisor `l` of `m` could be the period of a block under the
// element: a block meets the cycle of length `len` in `len / l` points and
// there are at least `l` blocks, both at most `max_block`.
fn period_possible(m: usize, len: usize, max_block: usize) -> bool {
    let fits = |l: usize| l <= max_block && len / l <= max_block;
    (1..)
        .take_while(|d| d * d <= m)
        .filter(|d| m % d == 0)
        .any(|d| fits(d) || fits(m / d))
}

// Points (0-based) of some cycle longer than `threshold` of an element of
// <p, q>, starting anywhere on the cycle.
fn long_cycle(p: &Permutation, q: &Permutation, threshold: usize) -> Option<Vec<usize>> {
    const CANDIDATES: usize = 64;
    if let Some(c) = longest_cycle_over(p, threshold) {
        return Some(c);
    }
    if let Some(c) = longest_cycle_over(q, threshold) {
        return Some(c);
    }
    // Fixed seed: the test outcome never depends on which element is used.
    let mut rng = RandomSource::new(0x5eed_b10c, 0);
    let mut pr = ProductReplacement::new(&[p, q], &mut rng);
    for _ in 0..CANDIDATES {
        if let Some(c) = longest_cycle_over(pr.next(&mut rng), threshold) {
            return Some(c);
        }
    }
    None
}

fn longest_cycle_over(g: &Permutation, threshold: usize) -> Option<Vec<usize>> {
    let mut found = None;
    g.for_each_cycle(|start, len| {
        if len > threshold {
            found = Some(start);
        }
        found.is_none()
    });
    let start = found?;
    let img = g.images();
    let mut cycle = vec![start];
    let mut x = img[start] as usize;
    while x != start {
        cycle.push(x);
        x = img[x] as usize;
    }
    Some(cycle)
}

/// All-pairs refinement: primitive iff every `(1, x)` refines to one block.
pub fn find_block_system_exhaustive(
    p: &Permutation,
    q: &Permutation,
) -> Result<Option<BlockSystem>> {
    let n = check_pair(p, q)?;
    if !is_transitive(p, q)? {
        return Err(Error::NotTransitive);
    }
    for x in 1..n {
        let mut ds = minimal_blocks(&[p, q], 0, x, n).expect("no class exceeds n");
        if ds.components() > 1 {
            return Ok(Some(system_from(&mut ds)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_class, sample_uniform};
    use proptest::prelude::*;

    fn perm(n: usize, s: &str) -> Permutation {
        Permutation::parse_with_degree(s, n).unwrap()
    }

    #[test]
    fn cyclic_four_is_imprimitive() {
        let p = perm(4, "(1 2 3 4)");
        let id = Permutation::identity(4);
        let sys = find_block_system(&p, &id).unwrap().unwrap();
        assert_eq!(sys.blocks, vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(minimal_block_containing(&p, &id, (1, 3)).unwrap(), vec![1, 3]);
        assert_eq!(minimal_block_containing(&p, &id, (1, 2)).unwrap(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn s3_is_primitive() {
        assert!(is_primitive(&perm(3, "(1 2 3)"), &perm(3, "(1 2)")).unwrap());
    }

    #[test]
    fn klein_pair_has_a_block_system() {
        let a = perm(4, "(1 2)(3 4)");
        let b = perm(4, "(1 3)(2 4)");
        let sys = find_block_system(&a, &b).unwrap().unwrap();
        // one of {{1,2},{3,4}}, {{1,3},{2,4}}, {{1,4},{2,3}}
        assert_eq!(sys.blocks.len(), 2);
        assert_eq!(sys.block_size(), 2);
        assert!(sys.is_invariant_under(&a) && sys.is_invariant_under(&b));
    }

    #[test]
    fn intransitive_input_is_rejected() {
        let id = Permutation::identity(4);
        assert_eq!(find_block_system(&id, &id), Err(Error::NotTransitive));
        assert_eq!(
            minimal_block_containing(&id, &id, (1, 2)),
            Err(Error::NotTransitive)
        );
    }

    #[test]
    fn ncycle_with_transposition_follows_gcd() {
        let n = 12;
        let cyc = Permutation::from_cycles(n, &[(1..=n).collect()]).unwrap();
        for x in 1..n {
            let t = Permutation::from_cycles(n, &[vec![x, n]]).unwrap();
            let primitive = is_primitive(&cyc, &t).unwrap();
            assert_eq!(primitive, crate::exact::gcd_u64(x as u64, n as u64) == 1, "x = {x}");
        }
    }

    #[test]
    fn large_imprimitive_group_is_found_quickly() {
        // n-cycle and a transposition (x n) with gcd(x, n) = 4 at n = 200000.
        let n = 200_000;
        let cyc = Permutation::from_cycles(n, &[(1..=n).collect()]).unwrap();
        let t = Permutation::from_cycles(n, &[vec![4, n]]).unwrap();
        let sys = find_block_system(&cyc, &t).unwrap().unwrap();
        assert!(sys.is_invariant_under(&cyc) && sys.is_invariant_under(&t));
        assert!(sys.blocks.len() > 1 && sys.block_size() > 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn fast_test_agrees_with_all_pairs(seed in any::<u64>(), n in 2usize..=16, kind in 0u8..3) {
            let mut rng = RandomSource::new(seed, 0);
            // Mix of generic pairs and structured (often imprimitive) ones.
            let (p, q) = match kind {
                0 => (sample_uniform(n, &mut rng), sample_uniform(n, &mut rng)),
                1 => {
                    let t = crate::cycle_type::CycleType::full_cycle(n);
                    (sample_class(&t, &mut rng), sample_uniform(n, &mut rng).pow(2))
                }
                _ => {
                    let half: crate::cycle_type::CycleType = if n % 2 == 0 {
                        format!("2^{}", n / 2).parse().unwrap()
                    } else {
                        crate::cycle_type::CycleType::full_cycle(n)
                    };
                    (sample_class(&half, &mut rng), sample_class(&half, &mut rng))
                }
            };
            prop_assume!(is_transitive(&p, &q).unwrap());
            let fast = find_block_system(&p, &q).unwrap();
            let slow = find_block_system_exhaustive(&p, &q).unwrap();
            prop_assert_eq!(fast.is_some(), slow.is_some());
            if let Some(sys) = fast {
                prop_assert!(sys.is_invariant_under(&p) && sys.is_invariant_under(&q));
                prop_assert!(sys.blocks.len() > 1 && sys.block_size() > 1);
                prop_assert!(sys.blocks.iter().all(|b| b.len() == sys.block_size()));
            }
        }
    }
}
