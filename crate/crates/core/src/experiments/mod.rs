//! Monte Carlo experiments over random generator pairs.

mod config;
mod runner;
mod stats;

pub use config::{parse_pairs, ClassSpec, ExperimentConfig, PreparedSpec, Sampling, KNOWN_OUTPUTS};
pub use runner::{
    mode_supported, ncycle_transposition, poisson_check, run_generation_experiment, share_two_cycle,
    two_cycle_collision, CensusSummary, CollisionReport, ExhaustiveCheck, ExperimentResult,
    FactorialMoment, GenerationEstimates, NcycleTranspositionReport, PoissonReport, Provenance,
    CENSUS_K_MAX, NCYCLE_EXHAUSTIVE_LIMIT,
};
pub use stats::{wilson_interval, Estimate, Z95};
