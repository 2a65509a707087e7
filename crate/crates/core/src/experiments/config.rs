use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{ClassifyOptions, Mode};
use crate::cycle_type::CycleType;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::sampling::{
    enumerate_types_of_order, sample_class, sample_conjugate, sample_from_table, sample_uniform,
    OrderMClassTable,
};

/// Where a generator is drawn from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassSpec {
    Type(CycleType),
    Order(u64),
    Uniform,
}

impl FromStr for ClassSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "uniform" {
            return Ok(ClassSpec::Uniform);
        }
        if let Some(m) = s.strip_prefix("order:") {
            let m = m
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("bad order in {s:?}")))?;
            if m == 0 {
                return Err(Error::Config("order must be positive".into()));
            }
            return Ok(ClassSpec::Order(m));
        }
        s.parse::<CycleType>()
            .map(ClassSpec::Type)
            .map_err(|e| Error::Config(e.to_string()))
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSpec::Type(t) => write!(f, "{t}"),
            ClassSpec::Order(m) => write!(f, "order:{m}"),
            ClassSpec::Uniform => write!(f, "uniform"),
        }
    }
}

impl Serialize for ClassSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// How the second generator is drawn for a fixed cycle type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    /// Uniform in the class.
    Class,
    /// Uniform conjugate of the canonical representative.
    Conjugate,
}

impl FromStr for Sampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "class" => Ok(Sampling::Class),
            "conjugate" => Ok(Sampling::Conjugate),
            other => Err(Error::Config(format!("unknown sampling {other:?}"))),
        }
    }
}

/// A `ClassSpec` checked against `n`, with any order table precomputed.
#[derive(Clone, Debug)]
pub enum PreparedSpec {
    Type(CycleType, Permutation),
    Order(OrderMClassTable),
    Uniform(usize),
}

impl PreparedSpec {
    pub fn new(spec: &ClassSpec, n: usize) -> Result<Self> {
        match spec {
            ClassSpec::Type(t) => {
                if t.degree() != n {
                    return Err(Error::Config(format!(
                        "class {t} has degree {}, expected n = {n}",
                        t.degree()
                    )));
                }
                Ok(PreparedSpec::Type(t.clone(), t.representative()))
            }
            ClassSpec::Order(m) => {
                let table = enumerate_types_of_order(n, *m);
                if table.is_empty() {
                    return Err(Error::Config(format!("no element of order {m} in S_{n}")));
                }
                Ok(PreparedSpec::Order(table))
            }
            ClassSpec::Uniform => Ok(PreparedSpec::Uniform(n)),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, sampling: Sampling, rng: &mut R) -> Permutation {
        match (self, sampling) {
            (PreparedSpec::Type(t, _), Sampling::Class) => sample_class(t, rng),
            (PreparedSpec::Type(_, rep), Sampling::Conjugate) => sample_conjugate(rep, rng),
            (PreparedSpec::Order(table), Sampling::Class) => {
                sample_from_table(table, rng).expect("nonempty table")
            }
            (PreparedSpec::Order(table), Sampling::Conjugate) => {
                let t = table.sample_type(rng).expect("nonempty table");
                sample_conjugate(&t.representative(), rng)
            }
            (PreparedSpec::Uniform(n), _) => sample_uniform(*n, rng),
        }
    }

    pub fn cycle_type(&self) -> Option<&CycleType> {
        match self {
            PreparedSpec::Type(t, _) => Some(t),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub class: ClassSpec,
    pub class2: ClassSpec,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    pub budget: usize,
    pub oracle_limit: usize,
    /// Worker threads; `0` uses all cores. Never changes the result.
    pub workers: usize,
    /// How the second generator is drawn; the first is always in-class.
    pub sampling: Sampling,
    /// Largest `k` for `E N_k` and census statistics.
    pub k_max: usize,
    /// Sections of the result to fill: `verdicts`, `census`.
    pub outputs: Vec<String>,
}

pub const KNOWN_OUTPUTS: [&str; 2] = ["verdicts", "census"];

impl ExperimentConfig {
    pub fn new(n: usize, class: ClassSpec, class2: ClassSpec) -> Self {
        ExperimentConfig {
            n,
            class,
            class2,
            trials: 10_000,
            seed: 0,
            mode: Mode::Certificate,
            budget: ClassifyOptions::default().budget,
            oracle_limit: ClassifyOptions::default().oracle_limit,
            workers: 0,
            sampling: Sampling::Class,
            k_max: 6,
            outputs: KNOWN_OUTPUTS.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions {
            mode: self.mode,
            budget: self.budget,
            oracle_limit: self.oracle_limit,
        }
    }

    pub fn wants(&self, output: &str) -> bool {
        self.outputs.iter().any(|o| o == output)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.mode == Mode::Exact && self.n > self.oracle_limit {
            return Err(Error::OracleLimitExceeded {
                n: self.n,
                limit: self.oracle_limit,
            });
        }
        for o in &self.outputs {
            if !KNOWN_OUTPUTS.contains(&o.as_str()) {
                return Err(Error::Config(format!("unknown output {o:?}")));
            }
        }
        PreparedSpec::new(&self.class, self.n)?;
        PreparedSpec::new(&self.class2, self.n)?;
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment. `n`, `class` and
    /// `class2` are required, everything else has a default.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    pub fn from_pairs(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let required = |k: &str| get(k).ok_or_else(|| Error::Config(format!("missing key {k:?}")));
        let n: usize = parse_num("n", required("n")?)?;
        let mut cfg = ExperimentConfig::new(n, required("class")?.parse()?, required("class2")?.parse()?);
        for (k, v) in map {
            match k.as_str() {
                "n" | "class" | "class2" => {}
                "trials" => cfg.trials = parse_num(k, v)?,
                "seed" => cfg.seed = parse_num(k, v)?,
                "mode" => cfg.mode = v.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
                "budget" => cfg.budget = parse_num(k, v)?,
                "oracle_limit" => cfg.oracle_limit = parse_num(k, v)?,
                "workers" => cfg.workers = parse_num(k, v)?,
                "sampling" => cfg.sampling = v.parse()?,
                "k_max" => cfg.k_max = parse_num(k, v)?,
                "outputs" => {
                    cfg.outputs = v
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                }
                other => return Err(Error::Config(format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }
}

/// `key = value` lines into a map; `#` starts a comment and later lines win.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RandomSource;

    #[test]
    fn specs_round_trip() {
        for s in ["uniform", "order:6", "1^3,2^2,5"] {
            assert_eq!(s.parse::<ClassSpec>().unwrap().to_string(), s);
        }
        assert!("order:x".parse::<ClassSpec>().is_err());
        assert!("order:0".parse::<ClassSpec>().is_err());
        assert!("banana".parse::<ClassSpec>().is_err());
    }

    #[test]
    fn config_file() {
        let cfg = ExperimentConfig::parse(
            "# test\nn = 12\nclass = 2^6\nclass2 = uniform\ntrials = 50\nseed=9\nmode = exact\nsampling = conjugate\noutputs = verdicts\n",
        )
        .unwrap();
        assert_eq!(cfg.n, 12);
        assert_eq!(cfg.trials, 50);
        assert_eq!(cfg.mode, Mode::Exact);
        assert_eq!(cfg.sampling, Sampling::Conjugate);
        assert!(cfg.wants("verdicts") && !cfg.wants("census"));
        cfg.validate().unwrap();

        assert!(ExperimentConfig::parse("n = 4\nclass = 2^2").is_err());
        assert!(ExperimentConfig::parse("n = 4\nclass = 2^2\nclass2 = 4\ncolour = red").is_err());
        let bad_degree = ExperimentConfig::parse("n = 5\nclass = 2^2\nclass2 = 5").unwrap();
        assert!(matches!(bad_degree.validate(), Err(Error::Config(_))));
        let no_order = ExperimentConfig::parse("n = 3\nclass = order:4\nclass2 = 3").unwrap();
        assert!(no_order.validate().is_err());
        let too_big = ExperimentConfig::parse("n = 20\nclass = 20\nclass2 = 20\nmode = exact").unwrap();
        assert!(too_big.validate().unwrap_err().is_limit());
    }

    #[test]
    fn prepared_specs_draw_the_right_kind() {
        let mut rng = RandomSource::new(1, 1);
        let t: CycleType = "1,2,3".parse().unwrap();
        let spec = PreparedSpec::new(&ClassSpec::Type(t.clone()), 6).unwrap();
        for sampling in [Sampling::Class, Sampling::Conjugate] {
            assert_eq!(spec.sample(sampling, &mut rng).cycle_type(), t);
        }
        let spec = PreparedSpec::new(&ClassSpec::Order(6), 6).unwrap();
        for sampling in [Sampling::Class, Sampling::Conjugate] {
            assert_eq!(spec.sample(sampling, &mut rng).order(), 6u32.into());
        }
    }
}
