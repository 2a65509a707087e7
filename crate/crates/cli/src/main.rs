use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use symgen::cycle_type::all_cycle_types;
use symgen::experiments::{
    ncycle_transposition, parse_pairs, poisson_check, run_generation_experiment, two_cycle_collision,
    ClassSpec, ExperimentConfig, PreparedSpec, Sampling,
};
use symgen::moments::{count_invariant_equipartitions, equipartition_bound, expected_n_with_limit};
use symgen::order_stats::{check_generation_hypotheses, order_m_profile, Thresholds};
use symgen::sampling::enumerate_types_of_order;
use symgen::{classify, ClassifyOptions, CycleType, Mode, Permutation, RandomSource};

#[derive(Parser)]
#[command(name = "symgen", version, about = "Random generation of symmetric groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw permutations from a class, an order or the whole group.
    Sample(SampleArgs),
    /// Classify the group generated by two permutations.
    Classify(ClassifyArgs),
    /// Estimate how often a random pair generates A_n or S_n.
    Estimate(ExperimentArgs),
    /// Exact expected number of orbits of each small size.
    ExactEn(ExactEnArgs),
    /// Fixed-point and 2-cycle profile of order-m elements.
    OrderStats(OrderStatsArgs),
    /// Compare small-orbit counts with their Poisson limit.
    PoissonCheck(ExperimentArgs),
    /// An n-cycle with a random transposition.
    NcycleTransposition(NcycleArgs),
    /// Cycle types of S_n with class sizes, or equipartition counts.
    Partitions(PartitionsArgs),
    /// How often two random permutations share a 2-cycle.
    Collision(ExperimentArgs),
}

#[derive(Args)]
struct Output {
    /// Write the JSON record here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a CSV table here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    /// `uniform`, `order:m` or a cycle type such as `1^2,3^2`.
    #[arg(long, default_value = "uniform")]
    class: String,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    n: usize,
    /// First generator, in cycle or one-line notation.
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    #[arg(long, default_value = "certificate")]
    mode: String,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    oracle_limit: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

/// Experiment settings. Flags override the config file key by key.
#[derive(Args)]
struct ExperimentArgs {
    /// File of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    class: Option<String>,
    #[arg(long)]
    class2: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    oracle_limit: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    sampling: Option<String>,
    #[arg(long)]
    k_max: Option<usize>,
    /// Comma-separated: `verdicts`, `census`.
    #[arg(long)]
    outputs: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ExactEnArgs {
    #[arg(long)]
    class: String,
    #[arg(long)]
    class2: String,
    /// Defaults to n/2.
    #[arg(long)]
    k_max: Option<usize>,
    /// Largest k evaluated exactly.
    #[arg(long, default_value_t = symgen::moments::DEFAULT_EXACT_LIMIT)]
    limit: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OrderStatsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: u64,
    #[arg(long, default_value_t = Thresholds::default().fix_coeff)]
    fix_coeff: f64,
    #[arg(long, default_value_t = Thresholds::default().twocycle_frac)]
    twocycle_frac: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct NcycleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PartitionsArgs {
    #[arg(long)]
    n: usize,
    /// Only cycle types of this order.
    #[arg(long)]
    order: Option<u64>,
    /// Count partitions into this many cells of equal size instead.
    #[arg(long)]
    cells: Option<usize>,
    /// With `--cells`: also count those preserved by this permutation.
    #[arg(long, requires = "cells")]
    perm: Option<String>,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Lib(symgen::Error),
    Io(String),
}

impl From<symgen::Error> for Failure {
    fn from(e: symgen::Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn emit(output: &Output, record: &Value, csv: Option<String>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(record).expect("JSON values always serialize");
    match &output.out {
        Some(path) => write_file(path, &(text + "\n"))?,
        None => println!("{text}"),
    }
    if let (Some(path), Some(csv)) = (&output.csv, csv) {
        write_file(path, &csv)?;
    }
    Ok(())
}

fn write_file(path: &PathBuf, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data")
}

fn config_error(msg: impl Into<String>) -> Failure {
    Failure::Lib(symgen::Error::Config(msg.into()))
}

impl ExperimentArgs {
    fn to_config(&self) -> CliResult<ExperimentConfig> {
        let mut pairs = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
                parse_pairs(&text)?
            }
            None => BTreeMap::new(),
        };
        let flags = [
            ("n", self.n.map(|v| v.to_string())),
            ("class", self.class.clone()),
            ("class2", self.class2.clone()),
            ("trials", self.trials.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("mode", self.mode.clone()),
            ("budget", self.budget.map(|v| v.to_string())),
            ("oracle_limit", self.oracle_limit.map(|v| v.to_string())),
            ("workers", self.workers.map(|v| v.to_string())),
            ("sampling", self.sampling.clone()),
            ("k_max", self.k_max.map(|v| v.to_string())),
            ("outputs", self.outputs.clone()),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                pairs.insert(key.to_string(), v);
            }
        }
        let cfg = ExperimentConfig::from_pairs(&pairs)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sample(args: &SampleArgs) -> CliResult<()> {
    let spec: ClassSpec = args.class.parse()?;
    let prepared = PreparedSpec::new(&spec, args.n)?;
    let mut rng = RandomSource::new(args.seed, args.stream);
    let drawn: Vec<Value> = (0..args.count)
        .map(|_| {
            let p = prepared.sample(Sampling::Class, &mut rng);
            json!({ "permutation": p.to_string(), "cycle_type": p.cycle_type().to_string() })
        })
        .collect();
    let mut csv = String::from("index,permutation,cycle_type\n");
    for (i, d) in drawn.iter().enumerate() {
        csv.push_str(&format!("{i},\"{}\",\"{}\"\n", d["permutation"].as_str().unwrap(), d["cycle_type"].as_str().unwrap()));
    }
    let record = json!({
        "n": args.n,
        "class": spec.to_string(),
        "seed": args.seed,
        "stream": args.stream,
        "samples": drawn,
    });
    emit(&args.output, &record, Some(csv))
}

fn classify_pair(args: &ClassifyArgs) -> CliResult<()> {
    let p = Permutation::parse_with_degree(&args.p, args.n)?;
    let q = Permutation::parse_with_degree(&args.q, args.n)?;
    let defaults = ClassifyOptions::default();
    let opts = ClassifyOptions {
        mode: args.mode.parse::<Mode>()?,
        budget: args.budget.unwrap_or(defaults.budget),
        oracle_limit: args.oracle_limit.unwrap_or(defaults.oracle_limit),
    };
    let mut rng = RandomSource::new(args.seed, 0);
    let result = classify(&p, &q, &opts, &mut rng)?;
    emit(&args.output, &to_value(&result), None)
}

fn estimate(args: &ExperimentArgs) -> CliResult<()> {
    let result = run_generation_experiment(&args.to_config()?)?;
    emit(&args.output, &to_value(&result), result.census_csv())
}

fn exact_en(args: &ExactEnArgs) -> CliResult<()> {
    let t: CycleType = args.class.parse()?;
    let t2: CycleType = args.class2.parse()?;
    if t.degree() != t2.degree() {
        return Err(config_error(format!(
            "classes have degrees {} and {}",
            t.degree(),
            t2.degree()
        )));
    }
    let k_max = args.k_max.unwrap_or(t.degree() / 2);
    let report = expected_n_with_limit(&t, &t2, k_max, args.limit)?;
    let mut csv = String::from("k,numerator,denominator,value\n");
    for term in &report.terms {
        csv.push_str(&format!("{},{},{},{}\n", term.k, term.numerator, term.denominator, term.value));
    }
    emit(&args.output, &to_value(&report), Some(csv))
}

fn order_stats(args: &OrderStatsArgs) -> CliResult<()> {
    let thresholds = Thresholds {
        fix_coeff: args.fix_coeff,
        twocycle_frac: args.twocycle_frac,
    };
    let report = check_generation_hypotheses(args.n, args.m, thresholds)?;
    let profile = order_m_profile(args.n, args.m)?;
    emit(&args.output, &to_value(&report), Some(profile.to_csv()))
}

fn poisson(args: &ExperimentArgs) -> CliResult<()> {
    let cfg = args.to_config()?;
    let report = poisson_check(&cfg, cfg.k_max)?;
    let mut csv = String::from("order,empirical,std_error,target,z_score\n");
    for m in &report.factorial_moments {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            m.order, m.empirical, m.std_error, m.target, m.z_score
        ));
    }
    emit(&args.output, &to_value(&report), Some(csv))
}

fn ncycle(args: &NcycleArgs) -> CliResult<()> {
    let report = ncycle_transposition(args.n, args.trials, args.seed, args.workers)?;
    emit(&args.output, &to_value(&report), None)
}

fn partitions(args: &PartitionsArgs) -> CliResult<()> {
    if let Some(k) = args.cells {
        let total = symgen::moments::equipartition_count(args.n, k)?;
        let mut record = json!({ "n": args.n, "cells": k, "equipartitions": total.to_string() });
        if let Some(text) = &args.perm {
            let p = Permutation::parse_with_degree(text, args.n)?;
            record["permutation"] = json!(p.to_string());
            record["invariant"] = json!(count_invariant_equipartitions(&p, k)?.to_string());
            record["bound"] = json!(equipartition_bound(&p, k).to_string());
        }
        return emit(&args.output, &record, None);
    }
    let entries: Vec<(CycleType, String)> = match args.order {
        Some(m) => {
            let table = enumerate_types_of_order(args.n, m);
            if table.is_empty() {
                return Err(symgen::Error::EmptyOrder { n: args.n, m }.into());
            }
            table.entries.into_iter().map(|(t, w)| (t, w.to_string())).collect()
        }
        None => all_cycle_types(args.n)
            .into_iter()
            .map(|t| {
                let size = t.class_size().to_string();
                (t, size)
            })
            .collect(),
    };
    let mut csv = String::from("type,order,class_size\n");
    let rows: Vec<Value> = entries
        .iter()
        .map(|(t, size)| {
            csv.push_str(&format!("\"{t}\",{},{size}\n", t.order()));
            json!({ "type": t.to_string(), "order": t.order().to_string(), "class_size": size })
        })
        .collect();
    let record = json!({ "n": args.n, "order": args.order, "count": rows.len(), "types": rows });
    emit(&args.output, &record, Some(csv))
}

fn collision(args: &ExperimentArgs) -> CliResult<()> {
    let report = two_cycle_collision(&args.to_config()?)?;
    emit(&args.output, &to_value(&report), None)
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Sample(a) => sample(a),
        Command::Classify(a) => classify_pair(a),
        Command::Estimate(a) => estimate(a),
        Command::ExactEn(a) => exact_en(a),
        Command::OrderStats(a) => order_stats(a),
        Command::PoissonCheck(a) => poisson(a),
        Command::NcycleTransposition(a) => ncycle(a),
        Command::Partitions(a) => partitions(a),
        Command::Collision(a) => collision(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            // Bad input of any kind is a configuration error; limits are reported apart.
            ExitCode::from(if e.is_limit() { 3 } else { 2 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
