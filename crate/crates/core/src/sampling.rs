//! Uniform samplers over `S_n`, over a conjugacy class, and over the
//! elements of a fixed order.

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycle_type::CycleType;
use crate::error::{Error, Result};
use crate::exact::{factorial, factorize, lcm_u64};
use crate::perm::Permutation;

/// Seeded generator for one Monte Carlo trial. Each `(seed, stream)` pair is
/// an independent ChaCha8 stream, so trial `i` draws the same values no
/// matter which worker runs it.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Fisher–Yates over `{1..n}`.
pub fn sample_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<u32> = (0..n as u32).collect();
    images.shuffle(rng);
    Permutation::from_images_unchecked(images)
}

/// Uniform element of the class with type `t`: a shuffled point sequence is
/// poured into the cycle slots of the canonical representative.
pub fn sample_class<R: Rng + ?Sized>(t: &CycleType, rng: &mut R) -> Permutation {
    let n = t.degree();
    let mut points: Vec<u32> = (0..n as u32).collect();
    points.shuffle(rng);
    let mut images = vec![0u32; n];
    let mut next = 0usize;
    for (&j, &c) in t.counts() {
        for _ in 0..c {
            let slot = &points[next..next + j];
            for i in 0..j {
                images[slot[i] as usize] = slot[(i + 1) % j];
            }
            next += j;
        }
    }
    Permutation::from_images_unchecked(images)
}

/// `p^sigma` for a uniform `sigma`.
pub fn sample_conjugate<R: Rng + ?Sized>(p: &Permutation, rng: &mut R) -> Permutation {
    let sigma = sample_uniform(p.degree(), rng);
    p.conjugate(&sigma).expect("same degree")
}

/// The conjugacy classes of order-`m` elements of `S_n`, weighted by size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderMClassTable {
    pub n: usize,
    pub m: u64,
    pub entries: Vec<(CycleType, BigUint)>,
    pub total: BigUint,
}

impl OrderMClassTable {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Class chosen with probability `weight / total` by exact big-integer
    /// inversion.
    pub fn sample_type<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<&CycleType> {
        if self.is_empty() {
            return Err(Error::EmptyOrder { n: self.n, m: self.m });
        }
        let mut r = rng.gen_biguint_below(&self.total);
        for (t, w) in &self.entries {
            if r < *w {
                return Ok(t);
            }
            r -= w;
        }
        unreachable!("draw below total always lands in an entry")
    }

    /// CSV with header `type,weight`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("type,weight\n");
        for (t, w) in &self.entries {
            out.push_str(&format!("\"{t}\",{w}\n"));
        }
        out
    }
}

/// Cycle types of `S_n` whose lengths have lcm exactly `m`, ordered
/// lexicographically by ascending length list. Empty when `m` is not an
/// element order of `S_n`.
pub fn enumerate_types_of_order(n: usize, m: u64) -> OrderMClassTable {
    let mut table = OrderMClassTable {
        n,
        m,
        entries: Vec::new(),
        total: BigUint::zero(),
    };
    if n == 0 || m == 0 {
        return table;
    }
    let Some(divisors) = usable_divisors(n, m) else {
        return table;
    };
    let mut types = Vec::new();
    let mut chosen = Vec::new();
    walk_order_types(&divisors, 0, n, 1, m, &mut chosen, &mut types);

    let mut keyed: Vec<(Vec<usize>, CycleType)> =
        types.into_iter().map(|t| (t.lengths(), t)).collect();
    keyed.sort();
    let nfact = factorial(n);
    for (_, t) in keyed {
        let w = t.class_size_given(&nfact);
        table.total += &w;
        table.entries.push((t, w));
    }
    table
}

// Divisors d > 1 of m with d <= n, in decreasing order; None if some prime
// power of m cannot fit in n points.
fn usable_divisors(n: usize, m: u64) -> Option<Vec<u64>> {
    let mut rest = m;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p <= n as u64 && rest > 1 {
        if rest % p == 0 {
            let mut pe = 1u64;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                pe *= p;
                e += 1;
            }
            if pe > n as u64 {
                return None;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if rest > 1 {
        return None;
    }
    debug_assert_eq!(factors, factorize(m));
    let mut divisors = vec![1u64];
    for (p, e) in factors {
        let mut next = Vec::new();
        for &d in &divisors {
            let mut x = d;
            for _ in 0..=e {
                if x <= n as u64 {
                    next.push(x);
                }
                x = x.saturating_mul(p);
            }
        }
        divisors = next;
    }
    divisors.retain(|&d| d > 1);
    divisors.sort_unstable_by(|a, b| b.cmp(a));
    Some(divisors)
}

fn walk_order_types(
    divisors: &[u64],
    idx: usize,
    remaining: usize,
    current_lcm: u64,
    m: u64,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<CycleType>,
) {
    if current_lcm == m {
        // Fixed points fill whatever is left; further parts are optional.
        let mut counts = chosen.clone();
        counts.push((1, remaining));
        out.push(CycleType::new(counts).expect("sums to n"));
    }
    // Prune when the parts still affordable cannot complete the lcm.
    let reachable = divisors[idx..]
        .iter()
        .filter(|&&d| d as usize <= remaining)
        .fold(current_lcm, |acc, &d| lcm_u64(acc, d));
    if reachable != m {
        return;
    }
    for i in idx..divisors.len() {
        let d = divisors[i] as usize;
        let mut count = 1;
        while d * count <= remaining {
            let new_lcm = lcm_u64(current_lcm, d as u64);
            chosen.push((d, count));
            walk_order_types(divisors, i + 1, remaining - d * count, new_lcm, m, chosen, out);
            chosen.pop();
            count += 1;
        }
    }
}

/// Uniform element of order `m`: class by size, then uniform in class.
pub fn sample_order_m<R: Rng + ?Sized>(n: usize, m: u64, rng: &mut R) -> Result<Permutation> {
    let table = enumerate_types_of_order(n, m);
    sample_from_table(&table, rng)
}

pub fn sample_from_table<R: Rng + ?Sized>(
    table: &OrderMClassTable,
    rng: &mut R,
) -> Result<Permutation> {
    let t = table.sample_type(rng)?.clone();
    Ok(sample_class(&t, rng))
}
