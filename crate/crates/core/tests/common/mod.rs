//! Brute-force oracles. Deliberately naive: they share no code with the
//! library beyond the `Permutation` container.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet, VecDeque};

use symgen::{CycleType, Permutation};

/// Every permutation of `n` points, as image vectors.
pub fn all_image_vectors(n: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x as u32);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn all_perms(n: usize) -> Vec<Permutation> {
    all_image_vectors(n)
        .into_iter()
        .map(|v| Permutation::from_images(v).unwrap())
        .collect()
}

/// Cycle lengths by walking images, sorted.
pub fn naive_cycle_lengths(p: &Permutation) -> Vec<usize> {
    let a = p.images();
    let mut seen = vec![false; a.len()];
    let mut out = Vec::new();
    for s in 0..a.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = a[x] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

pub fn naive_type(p: &Permutation) -> CycleType {
    CycleType::from_lengths(naive_cycle_lengths(p)).unwrap()
}

/// Orbit sizes of `<p, q>` by breadth-first search.
pub fn bfs_orbit_sizes(p: &Permutation, q: &Permutation) -> Vec<usize> {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        let mut size = 0;
        while let Some(x) = queue.pop_front() {
            size += 1;
            for y in [p.images()[x] as usize, q.images()[x] as usize] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable();
    sizes
}

/// `k -> N_k`
pub fn bfs_orbit_counts(p: &Permutation, q: &Permutation) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for s in bfs_orbit_sizes(p, q) {
        *out.entry(s).or_insert(0) += 1;
    }
    out
}

fn mul(a: &[u32], b: &[u32]) -> Vec<u32> {
    // x -> b[a[x]]: apply a first.
    a.iter().map(|&x| b[x as usize]).collect()
}

/// All elements of `<p, q>` by closure. Only for tiny degrees.
pub fn group_elements(p: &Permutation, q: &Permutation) -> HashSet<Vec<u32>> {
    let gens = [p.images().to_vec(), q.images().to_vec()];
    let identity: Vec<u32> = (0..p.degree() as u32).collect();
    let mut seen = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = mul(&g, s);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Subsets of size `k` (as bitmasks) mapped to themselves by `p`.
pub fn invariant_k_sets(p: &Permutation, k: usize) -> u64 {
    let n = p.degree();
    let a = p.images();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .filter(|&m| (0..n).filter(|&x| m >> x & 1 == 1).all(|x| m >> a[x] & 1 == 1))
        .count() as u64
}

/// All partitions of `0..n` into `cells` cells of equal size, each given as
/// a label vector with cells numbered by their smallest element's order.
pub fn equipartitions(n: usize, cells: usize) -> Vec<Vec<usize>> {
    assert_eq!(n % cells, 0);
    let size = n / cells;
    fn rec(x: usize, labels: &mut Vec<usize>, fill: &mut Vec<usize>, size: usize, out: &mut Vec<Vec<usize>>) {
        if x == labels.len() {
            out.push(labels.clone());
            return;
        }
        let opened = fill.iter().filter(|&&f| f > 0).count();
        for c in 0..fill.len() {
            // Open cells in order so each partition appears once.
            if c > opened {
                break;
            }
            if fill[c] < size {
                fill[c] += 1;
                labels[x] = c;
                rec(x + 1, labels, fill, size, out);
                fill[c] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, &mut vec![0; n], &mut vec![0; cells], size, &mut out);
    out
}

/// Whether `g` maps every cell of the labelled partition onto a cell.
pub fn preserves(g: &Permutation, labels: &[usize]) -> bool {
    let a = g.images();
    let mut image_of = BTreeMap::new();
    (0..labels.len()).all(|x| {
        let target = labels[a[x] as usize];
        *image_of.entry(labels[x]).or_insert(target) == target
    })
}

/// Whether a transitive `<p, q>` preserves some nontrivial equipartition.
pub fn has_nontrivial_blocks(p: &Permutation, q: &Permutation) -> bool {
    let n = p.degree();
    (2..n)
        .filter(|c| n % c == 0)
        .any(|cells| equipartitions(n, cells).iter().any(|l| preserves(p, l) && preserves(q, l)))
}

/// Fixed-point-free involutions of `n` points.
pub fn matchings(n: usize) -> Vec<Permutation> {
    all_perms(n)
        .into_iter()
        .filter(|p| naive_cycle_lengths(p).iter().all(|&l| l == 2))
        .collect()
}

/// All permutations grouped by their cycle type.
pub fn perms_by_type(n: usize) -> BTreeMap<CycleType, Vec<Permutation>> {
    let mut out: BTreeMap<CycleType, Vec<Permutation>> = BTreeMap::new();
    for p in all_perms(n) {
        out.entry(naive_type(&p)).or_default().push(p);
    }
    out
}

/// Order by iterating `p` until it returns to the identity.
pub fn naive_order(p: &Permutation) -> u64 {
    let identity: Vec<u32> = (0..p.degree() as u32).collect();
    let mut g = p.images().to_vec();
    let mut k = 1;
    while g != identity {
        g = mul(&g, p.images());
        k += 1;
    }
    k
}

pub fn is_odd(p: &Permutation) -> bool {
    naive_cycle_lengths(p).iter().filter(|&&l| l % 2 == 0).count() % 2 == 1
}
