//! Seeded instance generators.
//!
//! `gen_random` draws, in job-id order and all uniformly:
//! - `p_j` from `{1..=p_max}` (all processing times are drawn first);
//! - weights `w` from `{1..=10}`;
//! - `k` (k-norm) from `{1, 2, 3}`;
//! - deadlines `d` (throughput, tardiness) from `{1..=H}` with `H = sum p`;
//! - step tables: one to three distinct step times from `{1..=H}`, each
//!   raising the cost by an integer from `{1..=10}`.
//!
//! `gen_three_partition` builds `m` groups of three items from
//! `ceil(B/4) ..= ceil(B/2) - 1`, every job paying `W` once it ends after `B`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use crate::error::{GspError, Result};
use crate::instance::{CostFn, CostKind, Instance};

const MAX_WEIGHT: u32 = 10;
const MAX_STEPS: usize = 3;

pub fn gen_random(n: usize, m: usize, p_max: usize, kind: CostKind, seed: u64) -> Result<Instance> {
    if n == 0 || m == 0 || p_max == 0 {
        return Err(GspError::InvalidParameter(format!(
            "n, m and p_max must be at least 1 (got n = {n}, m = {m}, p_max = {p_max})"
        )));
    }
    let mut rng = Pcg64::seed_from_u64(seed);
    let ps: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=p_max)).collect();
    let horizon: usize = ps.iter().sum();
    let weight = |rng: &mut Pcg64| f64::from(rng.gen_range(1..=MAX_WEIGHT));
    let jobs = ps
        .into_iter()
        .map(|p| {
            let cost = match kind {
                CostKind::WeightedCompletion => CostFn::WeightedCompletion { w: weight(&mut rng) },
                CostKind::WeightedKNorm => CostFn::WeightedKNorm {
                    w: weight(&mut rng),
                    k: f64::from(rng.gen_range(1..=3u32)),
                },
                CostKind::Throughput => CostFn::Throughput {
                    w: weight(&mut rng),
                    d: rng.gen_range(1..=horizon) as f64,
                },
                CostKind::Tardiness => CostFn::Tardiness {
                    w: weight(&mut rng),
                    d: rng.gen_range(1..=horizon) as f64,
                },
                CostKind::Exponential => CostFn::Exponential { w: weight(&mut rng) },
                CostKind::StepTable => {
                    let steps = rng.gen_range(1..=MAX_STEPS.min(horizon));
                    let mut times: Vec<usize> = (1..=horizon).collect();
                    times.shuffle(&mut rng);
                    times.truncate(steps);
                    times.sort_unstable();
                    let mut level = 0.0;
                    let table = times
                        .into_iter()
                        .map(|t| {
                            level += weight(&mut rng);
                            (t as f64, level)
                        })
                        .collect();
                    CostFn::StepTable { table }
                }
            };
            (p, cost)
        })
        .collect();
    Instance::new(m, jobs)
}

/// Item sizes allowed for bound `B`: `B/4 <= a < B/2`.
pub fn three_partition_range(bound: usize) -> std::ops::RangeInclusive<usize> {
    bound.div_ceil(4)..=bound.div_ceil(2) - 1
}

/// All non-decreasing triples from the item range that sum to `B`.
pub fn three_partition_triples(bound: usize) -> Vec<[usize; 3]> {
    let range = three_partition_range(bound);
    let mut out = Vec::new();
    for a in range.clone() {
        for b in a..=*range.end() {
            if let Some(c) = bound.checked_sub(a + b) {
                if c >= b && range.contains(&c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// `n_triples` machines and `3 n_triples` jobs with throughput cost `W` past
/// deadline `B`. With `feasible`, each group of three is a triple summing to
/// `B` (so a zero-cost schedule exists); otherwise items are drawn iid from
/// the item range. Job order is shuffled either way.
pub fn gen_three_partition(
    bound: usize,
    n_triples: usize,
    feasible: bool,
    seed: u64,
    step: f64,
) -> Result<Instance> {
    if bound < 4 {
        return Err(GspError::InvalidParameter(format!("B must be at least 4, got {bound}")));
    }
    if n_triples == 0 {
        return Err(GspError::InvalidParameter("need at least one triple".into()));
    }
    if !(step.is_finite() && step >= 0.0) {
        return Err(GspError::InvalidParameter(format!("step height must be finite and >= 0, got {step}")));
    }
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut items: Vec<usize> = if feasible {
        let triples = three_partition_triples(bound);
        if triples.is_empty() {
            return Err(GspError::InvalidParameter(format!("no triple of items sums to B = {bound}")));
        }
        (0..n_triples)
            .flat_map(|_| *triples.choose(&mut rng).expect("non-empty"))
            .collect()
    } else {
        let range = three_partition_range(bound);
        (0..3 * n_triples).map(|_| rng.gen_range(range.clone())).collect()
    };
    items.shuffle(&mut rng);
    let jobs = items
        .into_iter()
        .map(|p| (p, CostFn::Throughput { w: step, d: bound as f64 }))
        .collect();
    Instance::new(n_triples, jobs)
}
