mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use symgen::cycle_type::all_cycle_types;
use symgen::exact::binomial;
use symgen::experiments::wilson_interval;
use symgen::moments::{
    binom_entropy_bounds, binom_entropy_upper_holds, class_size_lower_bound_holds,
    count_invariant_equipartitions, equipartition_bound, fixed_set_polynomial, fk_upper_bound,
    transitive_pair_count,
};
use symgen::orbits::is_transitive;
use symgen::sampling::{sample_class, sample_conjugate, sample_uniform};
use symgen::{classify, orbit_census, ClassifyOptions, CycleType, Permutation, RandomSource, Verdict};

use common::{is_odd, naive_cycle_lengths, naive_type};

fn perm(n: usize, seed: u64) -> Permutation {
    sample_uniform(n, &mut RandomSource::new(seed, 0))
}

/// A permutation moving only `moved` randomly chosen points.
fn sparse_perm(n: usize, moved: usize, rng: &mut RandomSource) -> Permutation {
    let mut points: Vec<u32> = (0..n as u32).collect();
    points.shuffle(rng);
    let support = &points[..moved.min(n)];
    let mut shuffled = support.to_vec();
    shuffled.shuffle(rng);
    let mut images: Vec<u32> = (0..n as u32).collect();
    for (&x, &y) in support.iter().zip(&shuffled) {
        images[x as usize] = y;
    }
    Permutation::from_images(images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_and_conjugation(n in 1usize..60, a in any::<u64>(), b in any::<u64>()) {
        let p = perm(n, a);
        let s = perm(n, b);
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert_eq!(p.conjugate(&s).unwrap().cycle_type(), p.cycle_type());
        prop_assert_eq!(p.cycle_type(), naive_type(&p));
    }

    #[test]
    fn composition_is_associative(n in 1usize..40, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (p, q, r) = (perm(n, a), perm(n, b), perm(n, c));
        let left = p.compose(&q).unwrap().compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn text_forms_round_trip(n in 1usize..40, a in any::<u64>()) {
        let p = perm(n, a);
        let t = p.cycle_type();
        prop_assert_eq!(t.to_string().parse::<CycleType>().unwrap(), t.clone());
        prop_assert_eq!(Permutation::parse_with_degree(&p.to_string(), n).unwrap(), p);
    }

    #[test]
    fn class_sampling_hits_the_class(n in 1usize..200, a in any::<u64>(), b in any::<u64>()) {
        let t = perm(n, a).cycle_type();
        let mut rng = RandomSource::new(b, 1);
        let p = sample_class(&t, &mut rng);
        prop_assert_eq!(naive_type(&p), t.clone());
        prop_assert_eq!(sample_conjugate(&p, &mut rng).cycle_type(), t);
    }

    #[test]
    fn census_accounts_for_every_point(n in 1usize..300, a in any::<u64>(), b in any::<u64>(), m in 0usize..300) {
        let p = perm(n, a);
        let q = sparse_perm(n, m, &mut RandomSource::new(b, 0));
        let census = orbit_census(&p, &q).unwrap();
        prop_assert_eq!(census.counts.iter().map(|(k, c)| k * c).sum::<usize>(), n);
        prop_assert_eq!(census.orbit_sizes(), common::bfs_orbit_sizes(&p, &q));
        let small: usize = census.counts.iter().filter(|(&k, _)| 2 * k <= n).map(|(_, c)| c).sum();
        prop_assert_eq!(census.small_orbit_total, small);
        prop_assert_eq!(census.is_transitive(), small == 0);
    }

    #[test]
    fn too_many_cycles_is_never_transitive(n in 2usize..80, m1 in 0usize..40, m2 in 0usize..40, seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed, 0);
        let p = sparse_perm(n, m1, &mut rng);
        let q = sparse_perm(n, m2, &mut rng);
        let c = naive_cycle_lengths(&p).len() + naive_cycle_lengths(&q).len();
        if c > n + 1 {
            prop_assert!(!is_transitive(&p, &q).unwrap());
        }
    }

    #[test]
    fn parity_rule(n in 5usize..40, a in any::<u64>(), b in any::<u64>(), m in 2usize..40) {
        let mut rng = RandomSource::new(b, 0);
        let p = perm(n, a);
        let q = sparse_perm(n, m, &mut rng);
        let v = classify(&p, &q, &ClassifyOptions::default(), &mut rng).unwrap().verdict;
        if v.contains_alternating() {
            prop_assert_eq!(v == Verdict::Symmetric, is_odd(&p) || is_odd(&q));
        }
    }

    #[test]
    fn fixed_set_identities(n in 1usize..200, a in any::<u64>(), k_frac in 0.0f64..1.0) {
        let t = perm(n, a).cycle_type();
        let poly = fixed_set_polynomial(&t);
        prop_assert_eq!(poly.sum(), BigUint::from(1u8) << t.total_cycles());
        let k = ((n as f64) * k_frac) as usize;
        let f = symgen::exact::biguint_to_f64(&poly.coefficient(k));
        prop_assert!(f <= fk_upper_bound(&t, k) * (1.0 + 1e-9), "f = {}, bound = {}", f, fk_upper_bound(&t, k));
    }

    #[test]
    fn class_size_bound(n in 1usize..200, a in any::<u64>()) {
        prop_assert!(class_size_lower_bound_holds(&perm(n, a).cycle_type()));
    }

    #[test]
    fn binomial_entropy_bounds(n in 1usize..300, k_frac in 0.0f64..=1.0) {
        let k = ((n as f64) * k_frac).round() as usize;
        prop_assert!(binom_entropy_upper_holds(n, k));
        if 0 < k && 2 * k <= n {
            let (lower, upper) = binom_entropy_bounds(n, k).unwrap();
            let c = symgen::exact::biguint_to_f64(&binomial(n, k));
            prop_assert!(lower <= c * (1.0 + 1e-12) && c <= upper * (1.0 + 1e-12));
        }
    }

    #[test]
    fn wilson_brackets_the_estimate(trials in 1u64..100_000, frac in 0.0f64..=1.0) {
        let s = ((trials as f64) * frac) as u64;
        let (lo, hi) = wilson_interval(s, trials, 1.96);
        let p = s as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn equipartition_bound_holds(n in 1usize..=12, a in any::<u64>(), m in 0usize..=12) {
        let p = sparse_perm(n, m, &mut RandomSource::new(a, 0));
        for k in (1..=n).filter(|k| n % k == 0) {
            prop_assert!(count_invariant_equipartitions(&p, k).unwrap() <= equipartition_bound(&p, k));
        }
    }
}

#[test]
fn transitive_pairs_vanish_past_the_cycle_limit() {
    for n in 1..=9 {
        let types = all_cycle_types(n);
        for t in &types {
            for t2 in &types {
                if t.total_cycles() + t2.total_cycles() > n + 1 {
                    assert_eq!(transitive_pair_count(t, t2).unwrap(), BigUint::from(0u8), "{t} {t2}");
                }
            }
        }
    }
}

#[test]
fn certificate_never_contradicts_exact() {
    let mut rng = RandomSource::new(2024, 0);
    let mut unknown = 0;
    let mut disagreements = Vec::new();
    for i in 0..10_000u64 {
        let n = 8 + (i % 5) as usize;
        let types = all_cycle_types(n);
        let p = if rng.gen_bool(0.5) {
            sample_uniform(n, &mut rng)
        } else {
            sample_class(types.choose(&mut rng).unwrap(), &mut rng)
        };
        let q = sample_class(types.choose(&mut rng).unwrap(), &mut rng);
        let exact = classify(&p, &q, &ClassifyOptions::exact(), &mut rng).unwrap().verdict;
        let cert = classify(&p, &q, &ClassifyOptions::default(), &mut rng).unwrap().verdict;
        if cert == Verdict::UnknownPrimitive {
            assert!(matches!(exact, Verdict::PrimitiveProper | Verdict::Alternating | Verdict::Symmetric));
            unknown += 1;
        } else if cert != exact {
            disagreements.push((p, q, exact, cert));
        }
    }
    assert!(disagreements.is_empty(), "{:?}", &disagreements[..disagreements.len().min(3)]);
    assert!(unknown < 10_000);
}
