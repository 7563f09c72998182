//! Benchmark suites: generator specs crossed with instance and solver seed
//! ranges, solved on a worker pool and reported in a fixed order.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{Context, Result};
use gsp_core::generate::{gen_random, gen_three_partition};
use gsp_core::pipeline::{self, RunReport};
use gsp_core::rounding::RoundingConfig;
use gsp_core::{CostKind, GridMode, GspError, Instance};
use serde::{Deserialize, Serialize};

use crate::{emit, read_text};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    #[serde(default = "one")]
    pub format: u32,
    #[serde(default)]
    pub entries: Vec<Entry>,
    /// Also compute brute-force optima where the guards allow.
    #[serde(default)]
    pub brute: bool,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default = "default_max_phases")]
    pub max_phases: usize,
    #[serde(default)]
    pub grid: GridMode,
}

/// (entry index, instance seed, solver seed)
type RunKey = (usize, u64, u64);

fn one() -> u32 {
    1
}

fn default_max_phases() -> usize {
    64
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub id: String,
    pub generator: Generator,
    /// Half-open range `[start, end)` of generator seeds.
    pub instance_seeds: (u64, u64),
    /// Half-open range `[start, end)` of rounding seeds.
    #[serde(default = "single_seed")]
    pub solver_seeds: (u64, u64),
}

fn single_seed() -> (u64, u64) {
    (0, 1)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Generator {
    Random {
        n: usize,
        m: usize,
        p_max: usize,
        cost: CostKind,
    },
    ThreePartition {
        b: usize,
        triples: usize,
        #[serde(default = "yes")]
        feasible: bool,
        #[serde(default = "unit_step")]
        step: f64,
    },
}

fn yes() -> bool {
    true
}

fn unit_step() -> f64 {
    1.0
}

impl Generator {
    fn build(&self, seed: u64) -> gsp_core::Result<Instance> {
        match *self {
            Generator::Random { n, m, p_max, cost } => gen_random(n, m, p_max, cost, seed),
            Generator::ThreePartition { b, triples, feasible, step } => {
                gen_three_partition(b, triples, feasible, seed, step)
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BenchRun {
    pub entry: String,
    pub instance_seed: u64,
    pub solver_seed: u64,
    pub report: RunReport,
}

#[derive(Debug, Default, Serialize)]
pub struct Aggregate {
    pub runs: usize,
    pub mean_ratio_alg_lp: Option<f64>,
    pub max_ratio_alg_lp: Option<f64>,
    pub mean_ratio_alg_brute: Option<f64>,
    pub max_ratio_alg_brute: Option<f64>,
    pub mean_phases: Option<f64>,
    pub mean_cuts: Option<f64>,
    pub fallbacks: usize,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub format: u32,
    pub runs: Vec<BenchRun>,
    pub aggregate: Aggregate,
}

struct Job {
    order: (usize, u64, u64),
    entry: usize,
    instance_seed: u64,
    solver_seed: u64,
}

pub fn run_suite(suite: &Suite, threads: usize) -> Result<BenchReport> {
    let mut jobs = Vec::new();
    for (e, entry) in suite.entries.iter().enumerate() {
        for instance_seed in entry.instance_seeds.0..entry.instance_seeds.1 {
            for solver_seed in entry.solver_seeds.0..entry.solver_seeds.1 {
                jobs.push(Job {
                    order: (e, instance_seed, solver_seed),
                    entry: e,
                    instance_seed,
                    solver_seed,
                });
            }
        }
    }

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(RunKey, Result<BenchRun>)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..threads.max(1).min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(k) else { break };
                let outcome = solve_one(suite, job);
                results.lock().expect("no worker panicked").push((job.order, outcome));
            });
        }
    });
    let mut results = results.into_inner().expect("no worker panicked");
    results.sort_by_key(|(order, _)| *order);
    let runs = results
        .into_iter()
        .map(|(_, r)| r)
        .collect::<Result<Vec<_>>>()?;
    let aggregate = aggregate(&runs);
    Ok(BenchReport {
        format: 1,
        runs,
        aggregate,
    })
}

fn solve_one(suite: &Suite, job: &Job) -> Result<BenchRun> {
    let entry = &suite.entries[job.entry];
    let context = || {
        format!(
            "entry {} instance seed {} solver seed {}",
            entry.id, job.instance_seed, job.solver_seed
        )
    };
    let instance = entry.generator.build(job.instance_seed).with_context(context)?;
    let mut cfg = RoundingConfig::for_instance(&instance);
    cfg.seed = job.solver_seed;
    cfg.max_phases = suite.max_phases;
    cfg.grid = suite.grid;
    if let Some(c) = suite.c {
        cfg.c = c;
    }
    let solved = pipeline::solve(&instance, &cfg, suite.brute).with_context(context)?;
    Ok(BenchRun {
        entry: entry.id.clone(),
        instance_seed: job.instance_seed,
        solver_seed: job.solver_seed,
        report: solved.report,
    })
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn max(values: &[f64]) -> Option<f64> {
    values.iter().copied().reduce(f64::max)
}

pub fn aggregate(runs: &[BenchRun]) -> Aggregate {
    let lp: Vec<f64> = runs.iter().filter_map(|r| r.report.ratio_alg_lp).collect();
    let brute: Vec<f64> = runs.iter().filter_map(|r| r.report.ratio_alg_brute).collect();
    let phases: Vec<f64> = runs.iter().map(|r| r.report.phases as f64).collect();
    let cuts: Vec<f64> = runs.iter().map(|r| r.report.cuts_added as f64).collect();
    Aggregate {
        runs: runs.len(),
        mean_ratio_alg_lp: mean(&lp),
        max_ratio_alg_lp: max(&lp),
        mean_ratio_alg_brute: mean(&brute),
        max_ratio_alg_brute: max(&brute),
        mean_phases: mean(&phases),
        mean_cuts: mean(&cuts),
        fallbacks: runs.iter().filter(|r| r.report.fallback_used).count(),
    }
}

pub fn cmd_bench(path: &Path, out: Option<&Path>, threads: Option<usize>) -> Result<u8> {
    let text = read_text(path)?;
    let suite: Suite = serde_json::from_str(&text)
        .map_err(|e| GspError::Parse(e.to_string()))
        .with_context(|| format!("loading suite {}", path.display()))?;
    if suite.format != 1 {
        return Err(GspError::Parse(format!("unsupported suite format {}", suite.format)).into());
    }
    let threads = threads
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1);
    let report = run_suite(&suite, threads)?;
    if report.aggregate.fallbacks > 0 {
        eprintln!("warning: {} run(s) used the phase-cap fallback", report.aggregate.fallbacks);
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(out, &text)?;
    Ok(0)
}
