//! Exact orbit-count moments and the explicit combinatorial bounds around them.

mod bounds;
mod equipartitions;
mod expected;
mod fixed_sets;
mod transitive;

pub use bounds::{
    binom_entropy_bounds, binom_entropy_upper_holds, class_size_lower_bound,
    class_size_lower_bound_holds, entropy_h, fk_upper_bound, fk_upper_bound_ln,
};
pub use equipartitions::{
    count_invariant_equipartitions, count_invariant_equipartitions_with_limit,
    equipartition_bound, equipartition_count, DEFAULT_EQUIPARTITION_LIMIT,
};
pub use expected::{
    common_fixed_point_disjoint_prob, expected_n, expected_n_with_limit, expected_nk_exact,
    two_cycle_collision_exact, ExpectedOrbitCounts, MomentReport, MomentTerm, RationalValue,
    DEFAULT_EXACT_LIMIT,
};
pub use fixed_sets::{fixed_set_counts_upto, fixed_set_polynomial, FixedSetPolynomial};
pub use transitive::{
    even_to_matchings, matchings_to_even, p_of_types, p_two_regular, transitive_pair_count,
    TransitivePairCounter,
};
