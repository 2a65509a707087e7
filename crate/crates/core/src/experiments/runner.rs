use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ClassSpec, ExperimentConfig, PreparedSpec, Sampling};
use super::stats::Estimate;
use crate::classify::{classify, ClassifyOptions, Mode, Verdict};
use crate::cycle_type::CycleType;
use crate::error::{Error, Result};
use crate::exact::{ratio, rational_to_f64, totient};
use crate::moments::{expected_n, two_cycle_collision_exact, MomentTerm, RationalValue};
use crate::orbits::orbit_census;
use crate::perm::Permutation;
use crate::sampling::{sample_class, RandomSource};

/// Largest `k` whose `N_k` distribution is recorded.
pub const CENSUS_K_MAX: usize = 6;

/// Counts merged across workers. Merging is commutative, so results do not
/// depend on how trials were split.
trait Tally: Default + Send {
    fn merge(self, other: Self) -> Self;
}

type Histogram = BTreeMap<usize, u64>;

fn merge_hist(mut a: Histogram, b: Histogram) -> Histogram {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Runs `trial(i, tally)` for `i in 0..trials` on `workers` threads (all
/// cores when zero).
fn run_parallel<T, F>(trials: u64, workers: usize, trial: F) -> Result<T>
where
    T: Tally,
    F: Fn(u64, &mut T) + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        (0..trials)
            .into_par_iter()
            .fold(T::default, |mut acc, i| {
                trial(i, &mut acc);
                acc
            })
            .reduce(T::default, T::merge)
    }))
}

#[derive(Default)]
struct GenerationTally {
    verdicts: BTreeMap<Verdict, u64>,
    small_orbits: Histogram,
    nk: BTreeMap<usize, Histogram>,
}

impl Tally for GenerationTally {
    fn merge(mut self, other: Self) -> Self {
        for (v, c) in other.verdicts {
            *self.verdicts.entry(v).or_insert(0) += c;
        }
        self.small_orbits = merge_hist(self.small_orbits, other.small_orbits);
        for (k, h) in other.nk {
            let mine = self.nk.remove(&k).unwrap_or_default();
            self.nk.insert(k, merge_hist(mine, h));
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub package: String,
    pub version: String,
    pub seed: u64,
    pub trials: u64,
}

impl Provenance {
    fn new(cfg: &ExperimentConfig) -> Self {
        Provenance {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: cfg.seed,
            trials: cfg.trials,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationEstimates {
    /// `<pi, pi'> >= A_n`
    pub at_least_alternating: Estimate,
    pub transitive: Estimate,
    pub alternating: Estimate,
    pub symmetric: Estimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    /// Empirical distribution of `N`, the number of orbits of size `<= n/2`.
    pub small_orbit_distribution: Histogram,
    pub mean_small_orbits: f64,
    /// For `k <= 6`: the distribution of `N_k`.
    pub nk_distribution: BTreeMap<usize, Histogram>,
    pub nk_mean: BTreeMap<usize, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub verdict_counts: BTreeMap<Verdict, u64>,
    pub estimates: GenerationEstimates,
    /// Frequency of `UnknownPrimitive`.
    pub unknown_rate: Estimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusSummary>,
    pub wall_time_secs: f64,
    pub provenance: Provenance,
}

impl ExperimentResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// JSON with the wall-time zeroed: identical for identical configs.
    pub fn deterministic_json(&self) -> String {
        let mut copy = self.clone();
        copy.wall_time_secs = 0.0;
        copy.to_json()
    }

    pub fn count(&self, v: Verdict) -> u64 {
        self.verdict_counts.get(&v).copied().unwrap_or(0)
    }

    /// CSV of the per-`k` census: `k,mean,count_0,count_1,...`.
    pub fn census_csv(&self) -> Option<String> {
        let census = self.census.as_ref()?;
        let width = census
            .nk_distribution
            .values()
            .filter_map(|h| h.keys().next_back())
            .max()
            .copied()
            .unwrap_or(0);
        let mut out = String::from("k,mean");
        for c in 0..=width {
            out.push_str(&format!(",count_{c}"));
        }
        out.push('\n');
        for (k, h) in &census.nk_distribution {
            out.push_str(&format!("{k},{}", census.nk_mean[k]));
            for c in 0..=width {
                out.push_str(&format!(",{}", h.get(&c).copied().unwrap_or(0)));
            }
            out.push('\n');
        }
        Some(out)
    }
}

fn hist_mean(h: &Histogram) -> f64 {
    let total: u64 = h.values().sum();
    if total == 0 {
        return 0.0;
    }
    h.iter().map(|(&x, &c)| x as f64 * c as f64).sum::<f64>() / total as f64
}

/// Draws `(pi, pi')` for every trial, classifies `<pi, pi'>` and aggregates.
pub fn run_generation_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let spec = PreparedSpec::new(&cfg.class, cfg.n)?;
    let spec2 = PreparedSpec::new(&cfg.class2, cfg.n)?;
    let options = cfg.classify_options();
    let want_census = cfg.wants("census");
    let k_cap = CENSUS_K_MAX.min(cfg.n);

    let tally: GenerationTally = run_parallel(cfg.trials, cfg.workers, |i, acc: &mut GenerationTally| {
        let mut rng = RandomSource::new(cfg.seed, i);
        let p = spec.sample(Sampling::Class, &mut rng);
        let q = spec2.sample(cfg.sampling, &mut rng);
        let result = classify(&p, &q, &options, &mut rng).expect("validated configuration");
        *acc.verdicts.entry(result.verdict).or_insert(0) += 1;
        if want_census {
            let census = orbit_census(&p, &q).expect("equal degrees");
            *acc.small_orbits.entry(census.small_orbit_total).or_insert(0) += 1;
            for k in 1..=k_cap {
                *acc.nk.entry(k).or_default().entry(census.count(k)).or_insert(0) += 1;
            }
        }
    })?;

    let mut verdict_counts = tally.verdicts;
    for v in Verdict::ALL {
        verdict_counts.entry(v).or_insert(0);
    }
    let count = |v: Verdict| verdict_counts[&v];
    let trials = cfg.trials;
    let estimates = GenerationEstimates {
        at_least_alternating: Estimate::new(count(Verdict::Alternating) + count(Verdict::Symmetric), trials),
        transitive: Estimate::new(trials - count(Verdict::Intransitive), trials),
        alternating: Estimate::new(count(Verdict::Alternating), trials),
        symmetric: Estimate::new(count(Verdict::Symmetric), trials),
    };
    let census = want_census.then(|| CensusSummary {
        mean_small_orbits: hist_mean(&tally.small_orbits),
        small_orbit_distribution: tally.small_orbits,
        nk_mean: tally.nk.iter().map(|(&k, h)| (k, hist_mean(h))).collect(),
        nk_distribution: tally.nk,
    });
    let mut config = cfg.clone();
    config.workers = 0;
    Ok(ExperimentResult {
        config,
        unknown_rate: Estimate::new(count(Verdict::UnknownPrimitive), trials),
        verdict_counts,
        estimates,
        census,
        wall_time_secs: start.elapsed().as_secs_f64(),
        provenance: Provenance::new(cfg),
    })
}

#[derive(Default)]
struct CensusTally {
    small_orbits: Histogram,
    truncated: Histogram,
}

impl Tally for CensusTally {
    fn merge(self, other: Self) -> Self {
        CensusTally {
            small_orbits: merge_hist(self.small_orbits, other.small_orbits),
            truncated: merge_hist(self.truncated, other.truncated),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorialMoment {
    pub order: usize,
    /// Mean of `(X)_order` over trials, `X = N_1 + ... + N_{k_max}`.
    pub empirical: f64,
    /// Sample standard error of `empirical`.
    pub std_error: f64,
    /// Standard error of `empirical` if `X` were `Poisson(lambda)`.
    pub model_std_error: f64,
    /// `lambda^order`
    pub target: f64,
    pub deviation: f64,
    /// `deviation` over the larger of the two standard errors.
    pub z_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonReport {
    pub config: ExperimentConfig,
    pub k_max: usize,
    pub terms: Vec<MomentTerm>,
    /// `lambda = E N_1 + ... + E N_{k_max}`
    pub lambda: RationalValue,
    /// `P(N = 0)`, `N` counting all orbits of size `<= n/2`.
    pub p_zero: Estimate,
    pub target_p_zero: f64,
    pub p_zero_deviation: f64,
    /// `P(N_1 + ... + N_{k_max} = 0)`
    pub p_zero_truncated: Estimate,
    pub factorial_moments: Vec<FactorialMoment>,
    pub wall_time_secs: f64,
    pub provenance: Provenance,
}

impl PoissonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

fn falling(x: usize, m: usize) -> f64 {
    (0..m).map(|i| x as f64 - i as f64).product()
}

/// `Var (X)_m` for `X ~ Poisson(lambda)`, from
/// `(X)_m^2 = sum_j C(m, j)^2 j! (X)_{2m - j}` and `E (X)_r = lambda^r`.
fn poisson_falling_variance(lambda: f64, m: usize) -> f64 {
    let mut second = 0.0;
    let mut binom = 1.0;
    let mut fact = 1.0;
    for j in 0..=m {
        if j > 0 {
            binom = binom * (m + 1 - j) as f64 / j as f64;
            fact *= j as f64;
        }
        second += binom * binom * fact * lambda.powi((2 * m - j) as i32);
    }
    (second - lambda.powi(2 * m as i32)).max(0.0)
}

fn both_types(cfg: &ExperimentConfig) -> Result<(CycleType, CycleType)> {
    match (&cfg.class, &cfg.class2) {
        (ClassSpec::Type(a), ClassSpec::Type(b)) => Ok((a.clone(), b.clone())),
        _ => Err(Error::Config("this check needs explicit cycle types for both classes".into())),
    }
}

/// Compares the law of `N` with `Poisson(lambda)`, `lambda` the exact
/// truncated `E N`.
pub fn poisson_check(cfg: &ExperimentConfig, k_max: usize) -> Result<PoissonReport> {
    cfg.validate()?;
    let (t, t2) = both_types(cfg)?;
    let start = Instant::now();
    let moments = expected_n(&t, &t2, k_max)?;
    let lambda = moments.lambda();
    let spec = PreparedSpec::new(&cfg.class, cfg.n)?;
    let spec2 = PreparedSpec::new(&cfg.class2, cfg.n)?;

    let tally: CensusTally = run_parallel(cfg.trials, cfg.workers, |i, acc: &mut CensusTally| {
        let mut rng = RandomSource::new(cfg.seed, i);
        let p = spec.sample(Sampling::Class, &mut rng);
        let q = spec2.sample(cfg.sampling, &mut rng);
        let census = orbit_census(&p, &q).expect("equal degrees");
        *acc.small_orbits.entry(census.small_orbit_total).or_insert(0) += 1;
        *acc.truncated.entry(census.count_up_to(k_max)).or_insert(0) += 1;
    })?;

    let trials = cfg.trials;
    let tf = trials as f64;
    let zeros = |h: &Histogram| h.get(&0).copied().unwrap_or(0);
    let p_zero = Estimate::new(zeros(&tally.small_orbits), trials);
    let factorial_moments = (1..=3)
        .map(|m| {
            let mean = tally.truncated.iter().map(|(&x, &c)| falling(x, m) * c as f64).sum::<f64>() / tf;
            let sq = tally.truncated.iter().map(|(&x, &c)| falling(x, m).powi(2) * c as f64).sum::<f64>() / tf;
            let std_error = ((sq - mean * mean).max(0.0) / tf).sqrt();
            let target = lambda.powi(m as i32);
            let model_std_error = (poisson_falling_variance(lambda, m) / tf).sqrt();
            let deviation = (mean - target).abs();
            let se = std_error.max(model_std_error);
            FactorialMoment {
                order: m,
                empirical: mean,
                std_error,
                model_std_error,
                target,
                deviation,
                z_score: if se > 0.0 {
                    deviation / se
                } else if deviation == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                },
            }
        })
        .collect();
    let target_p_zero = (-lambda).exp();
    let mut config = cfg.clone();
    config.workers = 0;
    Ok(PoissonReport {
        config,
        k_max,
        terms: moments.terms.clone(),
        lambda: moments.sum.clone(),
        p_zero_deviation: (p_zero.estimate - target_p_zero).abs(),
        p_zero,
        target_p_zero,
        p_zero_truncated: Estimate::new(zeros(&tally.truncated), trials),
        factorial_moments,
        wall_time_secs: start.elapsed().as_secs_f64(),
        provenance: Provenance::new(cfg),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveCheck {
    /// Transpositions `(1 x)`, `x = 2..=n`, for which `<(1 2 ... n), (1 x)> >= A_n`.
    pub generating: u64,
    pub total: u64,
    pub unknown: u64,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NcycleTranspositionReport {
    pub n: usize,
    pub totient: u64,
    /// `phi(n) / (n - 1)`
    pub exact: RationalValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<ExhaustiveCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo_z_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo_unknown: Option<u64>,
}

impl NcycleTranspositionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Largest `n` for the exhaustive part of [`ncycle_transposition`].
pub const NCYCLE_EXHAUSTIVE_LIMIT: usize = 20;

/// An `n`-cycle and a transposition: `>= A_n` exactly when the
/// transposition's points differ by a unit mod `n` along the cycle.
pub fn ncycle_transposition(
    n: usize,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<NcycleTranspositionReport> {
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {n}")));
    }
    let phi = totient(n as u64);
    let exact = ratio(phi.into(), ((n - 1) as u64).into());
    let exact_f = rational_to_f64(&exact);
    let options = |n: usize| {
        if n <= ClassifyOptions::default().oracle_limit {
            ClassifyOptions::exact()
        } else {
            ClassifyOptions::default()
        }
    };

    let exhaustive = (n <= NCYCLE_EXHAUSTIVE_LIMIT).then(|| {
        let cycle = Permutation::from_cycles(n, &[(1..=n).collect()]).expect("valid cycle");
        let mut rng = RandomSource::new(seed, 0);
        let (mut generating, mut unknown) = (0u64, 0u64);
        for x in 2..=n {
            let t = Permutation::from_cycles(n, &[vec![1, x]]).expect("valid transposition");
            let v = classify(&cycle, &t, &options(n), &mut rng).expect("n within limits").verdict;
            generating += v.contains_alternating() as u64;
            unknown += (v == Verdict::UnknownPrimitive) as u64;
        }
        ExhaustiveCheck {
            generating,
            total: (n - 1) as u64,
            unknown,
            agrees: unknown == 0 && generating == phi,
        }
    });

    let mut monte_carlo = None;
    let mut monte_carlo_unknown = None;
    if trials > 0 {
        let full = CycleType::full_cycle(n);
        let transposition = CycleType::new([(1, n - 2), (2, 1)])?;
        let opts = options(n);
        let tally: GenerationTally = run_parallel(trials, workers, |i, acc: &mut GenerationTally| {
            let mut rng = RandomSource::new(seed, i);
            let p = sample_class(&full, &mut rng);
            let q = sample_class(&transposition, &mut rng);
            let v = classify(&p, &q, &opts, &mut rng).expect("n within limits").verdict;
            *acc.verdicts.entry(v).or_insert(0) += 1;
        })?;
        let get = |v: Verdict| tally.verdicts.get(&v).copied().unwrap_or(0);
        monte_carlo = Some(Estimate::new(get(Verdict::Alternating) + get(Verdict::Symmetric), trials));
        monte_carlo_unknown = Some(get(Verdict::UnknownPrimitive));
    }
    Ok(NcycleTranspositionReport {
        n,
        totient: phi,
        exact: RationalValue::from(&exact),
        exhaustive,
        monte_carlo_z_score: monte_carlo.map(|e| e.z_score(exact_f)),
        monte_carlo,
        monte_carlo_unknown,
    })
}

#[derive(Default)]
struct CountTally {
    hits: u64,
}

impl Tally for CountTally {
    fn merge(self, other: Self) -> Self {
        CountTally {
            hits: self.hits + other.hits,
        }
    }
}

/// Whether `p` and `q` share a 2-cycle.
pub fn share_two_cycle(p: &Permutation, q: &Permutation) -> bool {
    let (a, b) = (p.images(), q.images());
    (0..a.len()).any(|x| {
        let y = a[x] as usize;
        y > x && a[y] as usize == x && b[x] as usize == y
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub config: ExperimentConfig,
    pub estimate: Estimate,
    /// Inclusion-exclusion value when both classes are explicit types.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<RationalValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
    pub wall_time_secs: f64,
    pub provenance: Provenance,
}

impl CollisionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Empirical probability that the two generators share a 2-cycle.
pub fn two_cycle_collision(cfg: &ExperimentConfig) -> Result<CollisionReport> {
    cfg.validate()?;
    let start = Instant::now();
    let spec = PreparedSpec::new(&cfg.class, cfg.n)?;
    let spec2 = PreparedSpec::new(&cfg.class2, cfg.n)?;
    let tally: CountTally = run_parallel(cfg.trials, cfg.workers, |i, acc: &mut CountTally| {
        let mut rng = RandomSource::new(cfg.seed, i);
        let p = spec.sample(Sampling::Class, &mut rng);
        let q = spec2.sample(cfg.sampling, &mut rng);
        acc.hits += share_two_cycle(&p, &q) as u64;
    })?;
    let estimate = Estimate::new(tally.hits, cfg.trials);
    let exact = match (spec.cycle_type(), spec2.cycle_type()) {
        (Some(a), Some(b)) => Some(two_cycle_collision_exact(a, b)?),
        _ => None,
    };
    let mut config = cfg.clone();
    config.workers = 0;
    Ok(CollisionReport {
        config,
        z_score: exact.as_ref().map(|e| estimate.z_score(rational_to_f64(e))),
        exact: exact.as_ref().map(RationalValue::from),
        estimate,
        wall_time_secs: start.elapsed().as_secs_f64(),
        provenance: Provenance::new(cfg),
    })
}

/// Whether the configuration's classification mode can run at degree `n`.
pub fn mode_supported(mode: Mode, n: usize, oracle_limit: usize) -> bool {
    mode == Mode::Certificate || n <= oracle_limit
}
