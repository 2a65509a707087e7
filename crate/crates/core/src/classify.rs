//! What is `<p, q>`? Intransitive, imprimitive, or primitive, and in the
//! last case whether it contains `A_n`.
//!
//! Exact mode decides the primitive case from the group order. Certificate
//! mode looks for an element with a cycle of prime length `r <= n - 3` whose
//! length divides no other cycle length: raising it to the lcm of the other
//! lengths leaves an `r`-cycle, and a primitive group containing one
//! contains `A_n` (Jordan). Failure to find one within the budget is
//! reported as `UnknownPrimitive`, never as a negative.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::{block_system_of_transitive, BlockSystem};
use crate::error::{Error, Result};
use crate::exact::{factorial, is_prime};
use crate::orbits::orbit_partition;
use crate::perm::{Parity, Permutation};
use crate::random_elements::ProductReplacement;
use crate::schreier_sims::{exact_order_oracle, DEFAULT_ORACLE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Intransitive,
    TransitiveImprimitive,
    PrimitiveProper,
    Alternating,
    Symmetric,
    UnknownPrimitive,
}

impl Verdict {
    pub const ALL: [Verdict; 6] = [
        Verdict::Intransitive,
        Verdict::TransitiveImprimitive,
        Verdict::PrimitiveProper,
        Verdict::Alternating,
        Verdict::Symmetric,
        Verdict::UnknownPrimitive,
    ];

    /// `<p, q> >= A_n`
    pub fn contains_alternating(self) -> bool {
        matches!(self, Verdict::Alternating | Verdict::Symmetric)
    }

    pub fn is_transitive(self) -> bool {
        self != Verdict::Intransitive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Certificate,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "certificate" => Ok(Mode::Certificate),
            other => Err(Error::Config(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub mode: Mode,
    /// Random elements examined in certificate mode.
    pub budget: usize,
    pub oracle_limit: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            mode: Mode::Certificate,
            budget: 200,
            oracle_limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

impl ClassifyOptions {
    pub fn exact() -> Self {
        ClassifyOptions {
            mode: Mode::Exact,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `|<p, q>|` from the stabilizer chain.
    ExactOrder {
        #[serde(with = "crate::serde_big::biguint")]
        order: BigUint,
    },
    /// The `element`-th examined element had a cycle of prime length
    /// `prime` whose length divides none of its other cycle lengths.
    PrimeCycle { prime: usize, element: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupClassification {
    pub verdict: Verdict,
    pub orbit_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_system: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub words_tried: usize,
}

impl GroupClassification {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// Largest prime `r <= n - 3` occurring as a cycle length of `g` such that
/// no other cycle length is divisible by `r`.
pub fn jordan_prime(g: &Permutation) -> Option<usize> {
    jordan_prime_of_lengths(&g.cycle_lengths())
}

fn jordan_prime_of_lengths(lengths: &[usize]) -> Option<usize> {
    let n: usize = lengths.iter().sum();
    if n < 5 {
        return None;
    }
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in lengths {
        *hist.entry(l).or_insert(0) += 1;
    }
    hist.iter()
        .rev()
        .filter(|&(&r, &c)| c == 1 && r <= n - 3 && is_prime(r as u64))
        .map(|(&r, _)| r)
        .find(|&r| hist.keys().all(|&l| l == r || l % r != 0))
}

fn parity_of_lengths(lengths: &[usize]) -> Parity {
    if lengths.iter().filter(|&&l| l % 2 == 0).count() % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

pub fn classify<R: Rng + ?Sized>(
    p: &Permutation,
    q: &Permutation,
    options: &ClassifyOptions,
    rng: &mut R,
) -> Result<GroupClassification> {
    let n = p.degree();
    if options.mode == Mode::Exact && n > options.oracle_limit {
        return Err(Error::OracleLimitExceeded {
            n,
            limit: options.oracle_limit,
        });
    }
    let mut orbits = orbit_partition(p, q)?;
    let mut orbit_sizes = Vec::new();
    for x in 0..n {
        if orbits.find(x) == x {
            orbit_sizes.push(orbits.class_size(x));
        }
    }
    orbit_sizes.sort_unstable();
    let mut result = GroupClassification {
        verdict: Verdict::Intransitive,
        orbit_sizes,
        block_system: None,
        certificate: None,
        words_tried: 0,
    };
    if orbits.components() != 1 {
        return Ok(result);
    }
    if let Some(BlockSystem { blocks }) = block_system_of_transitive(p, q) {
        result.verdict = Verdict::TransitiveImprimitive;
        result.block_system = Some(blocks);
        return Ok(result);
    }
    // One walk per generator serves both the parity split and the search.
    let lengths = [p.cycle_lengths(), q.cycle_lengths()];
    let contains_alternating_verdict = || {
        if lengths.iter().all(|l| parity_of_lengths(l) == Parity::Even) {
            Verdict::Alternating
        } else {
            Verdict::Symmetric
        }
    };
    match options.mode {
        Mode::Exact => {
            let order = exact_order_oracle(p, q, options.oracle_limit)?;
            let full = factorial(n);
            result.verdict = if order == full {
                Verdict::Symmetric
            } else if n >= 2 && order == &full / 2u32 {
                Verdict::Alternating
            } else {
                Verdict::PrimitiveProper
            };
            result.certificate = Some(Certificate::ExactOrder { order });
        }
        Mode::Certificate => {
            result.verdict = Verdict::UnknownPrimitive;
            for (i, l) in lengths.iter().enumerate().take(options.budget) {
                result.words_tried = i + 1;
                if let Some(prime) = jordan_prime_of_lengths(l) {
                    result.verdict = contains_alternating_verdict();
                    result.certificate = Some(Certificate::PrimeCycle { prime, element: i + 1 });
                    return Ok(result);
                }
            }
            if options.budget <= 2 {
                return Ok(result);
            }
            let mut pr = ProductReplacement::new(&[p, q], rng);
            for i in 2..options.budget {
                result.words_tried = i + 1;
                if let Some(prime) = jordan_prime(pr.next(rng)) {
                    result.verdict = contains_alternating_verdict();
                    result.certificate = Some(Certificate::PrimeCycle { prime, element: i + 1 });
                    return Ok(result);
                }
            }
        }
    }
    Ok(result)
}
