//! Permutations, conjugacy classes and the probability that two random
//! permutations with restricted cycle types generate `A_n` or `S_n`.
//!
//! Points are 1-based in every public interface.

pub mod blocks;
pub mod classify;
pub mod cycle_type;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod moments;
pub mod orbits;
pub mod order_stats;
pub mod perm;
pub mod random_elements;
pub mod sampling;
pub mod schreier_sims;
mod serde_big;

pub use classify::{classify, ClassifyOptions, GroupClassification, Mode, Verdict};
pub use cycle_type::CycleType;
pub use error::{Error, Result};
pub use exact::BigRational;
pub use num_bigint::BigUint;
pub use orbits::{orbit_census, OrbitCensus};
pub use perm::{Parity, Permutation};
pub use sampling::RandomSource;
