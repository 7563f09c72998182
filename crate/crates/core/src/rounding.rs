//! Phased randomized rounding of a fractional LP solution.
//!
//! Each phase draws `alpha_j ~ U(0, 1]` per job and sets `C_j` to the latest
//! slot with `x[j][t] >= c * alpha_j`. If the resulting completion vector is
//! valid the run ends. Otherwise every unsatisfied cover row `(b, D' = C)`
//! names a set of critical jobs (its positive-mass jobs minus the two
//! tenth-of-deficiency prefixes ordered by `D'`), and the next phase works on
//! `x~`: ones up to `C_j`, then `10 * x[j][t]` for critical jobs and zero for
//! the rest. Completion times only ever move later.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::Serialize;

use crate::error::{GspError, Result};
use crate::flow::{is_valid, schedule_for, CompletionVector, Schedule};
use crate::instance::{Instance, Time};
use crate::lp::{
    deficiency, eligible_times, separate, solve_lp, FracSolution, LpOptions, DEFAULT_TOL,
};
use crate::timeline::{build_timeline, GridMode, Timeline};

/// Factor by which critical fractional mass is scaled for the next phase.
pub const REINFLATION: f64 = 10.0;

/// Share of a row's deficiency that each non-critical prefix must reach.
pub const PREFIX_SHARE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct RoundingConfig {
    /// Sampling scale, `0 < c <= 1/10`.
    pub c: f64,
    pub max_phases: usize,
    pub seed: u64,
    pub tol: f64,
    /// Grid for the final schedule; feasibility during rounding always uses unit slots.
    pub grid: GridMode,
    /// Grow the critical set from rows that separation still finds violated
    /// in `x~`, until `x~` satisfies every row.
    pub close_critical_sets: bool,
    /// Run full separation on every `x~` and record the verdict.
    pub verify: bool,
}

impl RoundingConfig {
    pub fn for_instance(instance: &Instance) -> Self {
        RoundingConfig {
            c: default_c(instance),
            max_phases: 64,
            seed: 0,
            tol: DEFAULT_TOL,
            grid: GridMode::Unit,
            close_critical_sets: true,
            verify: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c <= 0.1) {
            return Err(GspError::InvalidParameter(format!(
                "sampling scale c must lie in (0, 0.1], got {}",
                self.c
            )));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(GspError::InvalidParameter(format!(
                "tolerance must be non-negative, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// `min(1/10, 1 / (1000 * max(1, ln ln(n P))))`.
pub fn default_c(instance: &Instance) -> f64 {
    let np = (instance.n() * instance.p_max()) as f64;
    let loglog = if np > 1.0 { np.ln().ln() } else { 0.0 };
    (1.0 / (1000.0 * loglog.max(1.0))).min(0.1)
}

/// `(LP_int, LP_frac)`: the cost up to each job's last full slot, and the
/// marginal-cost mass of the fractional tail.
pub fn split_cost(instance: &Instance, x: &FracSolution) -> (f64, f64) {
    let mut int_part = 0.0;
    let mut frac_part = 0.0;
    for (j, job) in instance.jobs().iter().enumerate() {
        let beta = x.last_full(j);
        int_part += job.cost.eval(beta);
        frac_part += (beta + 1..=x.horizon())
            .map(|t| x.get(j, t) * job.marginal_cost(t))
            .sum::<f64>();
    }
    (int_part, frac_part)
}

/// Latest slot `t` (possibly 0) with `x[j][t] >= threshold`.
pub fn latest_at_least(x: &FracSolution, j: usize, threshold: f64) -> Time {
    x.row(j)
        .iter()
        .rposition(|&v| v >= threshold)
        .map_or(0, |i| i + 1)
}

/// Completion times for given draws `alpha_j`.
pub fn completions_for(x: &FracSolution, c: f64, alpha: &[f64]) -> CompletionVector {
    CompletionVector(
        alpha
            .iter()
            .enumerate()
            .map(|(j, &a)| latest_at_least(x, j, c * a))
            .collect(),
    )
}

/// Draws `alpha_j` in job order and returns them with the sampled completions.
pub fn sample(x: &FracSolution, c: f64, rng: &mut impl Rng) -> (Vec<f64>, CompletionVector) {
    // 1 - U[0, 1) lies in (0, 1], so the threshold is never zero
    let alpha: Vec<f64> = (0..x.n()).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let completions = completions_for(x, c, &alpha);
    (alpha, completions)
}

/// The 0/1 solution that is 1 exactly up to each completion time.
pub fn integralize(completions: &CompletionVector, horizon: Time) -> FracSolution {
    FracSolution::from_completions(completions.as_slice(), horizon)
}

/// Start times `b` whose row `(b, D' = C)` has positive deficiency. Such a row
/// is unsatisfied by the integral solution, which is zero past `C`.
pub fn unsatisfied_cuts(instance: &Instance, completions: &CompletionVector) -> Vec<(Time, Vec<Time>)> {
    (1..=instance.horizon())
        .filter(|&b| deficiency(instance, b, completions.as_slice()) > 0)
        .map(|b| (b, completions.0.clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalSets {
    /// Jobs with positive eligible mass.
    pub support: Vec<usize>,
    /// Shortest prefix in increasing `D'` order reaching a tenth of the deficiency.
    pub low: Vec<usize>,
    /// Shortest prefix in decreasing `D'` order reaching a tenth of the deficiency.
    pub high: Vec<usize>,
    pub critical: Vec<usize>,
    /// The two prefixes covered the whole support, so all of it is critical.
    pub fallback: bool,
}

/// Critical jobs from `(job, D'_j, eligible mass)` triples. Ties in `D'` are
/// broken by ascending job id in both orders.
pub fn critical_from_masses(entries: &[(usize, Time, f64)], deficiency: f64) -> CriticalSets {
    let mut support: Vec<(usize, Time, f64)> =
        entries.iter().copied().filter(|e| e.2 > 0.0).collect();
    support.sort_by_key(|e| e.0);
    let need = PREFIX_SHARE * deficiency;
    let prefix = |order: &[(usize, Time, f64)]| -> Vec<usize> {
        let mut acc = 0.0;
        let mut out = Vec::new();
        for &(j, _, mass) in order {
            out.push(j);
            acc += mass;
            if acc >= need {
                break;
            }
        }
        out
    };
    let mut increasing = support.clone();
    increasing.sort_by_key(|e| (e.1, e.0));
    let mut decreasing = support.clone();
    decreasing.sort_by(|p, q| q.1.cmp(&p.1).then(p.0.cmp(&q.0)));
    let low = prefix(&increasing);
    let high = prefix(&decreasing);
    let ids: Vec<usize> = support.iter().map(|e| e.0).collect();
    let mut critical: Vec<usize> = ids
        .iter()
        .copied()
        .filter(|j| !low.contains(j) && !high.contains(j))
        .collect();
    let fallback = critical.is_empty();
    if fallback {
        critical = ids.clone();
    }
    CriticalSets {
        support: ids,
        low,
        high,
        critical,
        fallback,
    }
}

/// Critical jobs of row `(b, D')` with respect to the phase input `x_prev`.
pub fn critical_jobs(instance: &Instance, x_prev: &FracSolution, b: Time, d: &[Time]) -> CriticalSets {
    let v = deficiency(instance, b, d);
    let entries: Vec<(usize, Time, f64)> = (0..instance.n())
        .map(|j| {
            let mass = eligible_times(instance, b, d, j)
                .into_iter()
                .map(|t| x_prev.get(j, t))
                .sum();
            (j, d[j], mass)
        })
        .collect();
    critical_from_masses(&entries, v as f64)
}

/// `x~`: ones up to `C_j`; past it `min(1, 10 * x_prev)` for critical jobs and
/// zero otherwise.
pub fn reinflate(x_prev: &FracSolution, completions: &CompletionVector, critical: &[bool]) -> FracSolution {
    let horizon = x_prev.horizon();
    let rows = (0..x_prev.n())
        .map(|j| {
            let c = completions.0[j];
            let mut row: Vec<f64> = (1..=horizon)
                .map(|t| {
                    if t <= c {
                        1.0
                    } else if critical[j] {
                        (REINFLATION * x_prev.get(j, t)).min(1.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            for t in 1..row.len() {
                if row[t] > row[t - 1] {
                    row[t] = row[t - 1];
                }
            }
            row
        })
        .collect();
    FracSolution::from_rows(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionalDigest {
    pub fractional_entries: usize,
    pub fractional_mass: f64,
    pub max_fractional: f64,
}

impl FractionalDigest {
    pub fn of(x: &FracSolution) -> Self {
        let mut digest = FractionalDigest {
            fractional_entries: 0,
            fractional_mass: 0.0,
            max_fractional: 0.0,
        };
        for (_, _, v) in x.fractional_entries() {
            digest.fractional_entries += 1;
            digest.fractional_mass += v;
            digest.max_fractional = digest.max_fractional.max(v);
        }
        digest
    }
}

/// What happened in one phase.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRecord {
    pub phase: usize,
    pub alpha: Vec<f64>,
    pub c_alpha: CompletionVector,
    pub lp_int: f64,
    pub lp_frac: f64,
    /// All fractional entries were below `1/(P n)^2` and were zeroed instead of sampled.
    pub snapped: bool,
    /// Rows `(b, D')` left unsatisfied by the integral solution.
    pub cuts_violated: Vec<(Time, Vec<Time>)>,
    /// Critical jobs of each row in `cuts_violated`, in the same order.
    pub critical: Vec<Vec<usize>>,
    /// Extra rows (lifted to `D' >= C`) whose critical jobs were added because
    /// `x~` still violated them.
    pub closure_cuts: Vec<(Time, Vec<Time>)>,
    pub critical_union: Vec<usize>,
    /// Whether `x~` passed full separation, when checked.
    pub reinflated_feasible: Option<bool>,
    pub next_x: Option<FractionalDigest>,
}

#[derive(Debug, Clone)]
pub struct RoundingOutcome {
    /// Completion times on the unit grid.
    pub completions: CompletionVector,
    /// Completion times rounded up to the output grid; the reported cost uses these.
    pub rounded: CompletionVector,
    pub timeline: Timeline,
    pub schedule: Schedule,
    pub cost: f64,
    pub trace: Vec<PhaseRecord>,
    pub fallback_used: bool,
}

impl RoundingOutcome {
    pub fn phases(&self) -> usize {
        self.trace.len()
    }

    pub fn snapped(&self) -> bool {
        self.trace.last().is_some_and(|p| p.snapped)
    }
}

/// Solves the LP and rounds its optimum.
pub fn run(instance: &Instance, config: &RoundingConfig) -> Result<RoundingOutcome> {
    let lp = solve_lp(
        instance,
        &LpOptions {
            tol: config.tol,
            ..LpOptions::default()
        },
    )?;
    run_from(instance, &lp.x, config)
}

/// Rounds a feasible fractional solution `x`.
pub fn run_from(instance: &Instance, x: &FracSolution, config: &RoundingConfig) -> Result<RoundingOutcome> {
    let mut rng = Pcg64::seed_from_u64(config.seed);
    // 1 - U[0, 1) lies in (0, 1]; drawn in job order, phase by phase
    run_with_draws(instance, x, config, |_, _| 1.0 - rng.gen::<f64>())
}

/// As [`run_from`], with `draw(phase, job)` supplying each `alpha_j` in
/// `(0, 1]` instead of the seeded generator. Reinflation keeps `x~` feasible
/// for every choice of draws, so adversarial draws are a valid stress test.
pub fn run_with_draws(
    instance: &Instance,
    x: &FracSolution,
    config: &RoundingConfig,
    mut draw: impl FnMut(usize, usize) -> f64,
) -> Result<RoundingOutcome> {
    config.validate()?;
    let n = instance.n();
    let horizon = instance.horizon();
    if x.n() != n || x.horizon() != horizon {
        return Err(GspError::InvalidParameter(
            "fractional solution does not match the instance".into(),
        ));
    }
    let unit = Timeline::unit(horizon);
    let snap_below = 1.0 / ((instance.p_max() * n) as f64).powi(2);
    let mut current = x.clone();
    let mut previous: Option<CompletionVector> = None;
    let mut trace = Vec::new();

    for phase in 0..config.max_phases {
        let (lp_int, lp_frac) = split_cost(instance, &current);

        let tiny_tail = {
            let mut fractional = current.fractional_entries().peekable();
            fractional.peek().is_some() && fractional.all(|(_, _, v)| v < snap_below)
        };
        if tiny_tail {
            let snapped = current.completions();
            if is_valid(instance, &unit, &snapped) {
                trace.push(PhaseRecord {
                    phase,
                    alpha: Vec::new(),
                    c_alpha: snapped.clone(),
                    lp_int,
                    lp_frac,
                    snapped: true,
                    cuts_violated: Vec::new(),
                    critical: Vec::new(),
                    closure_cuts: Vec::new(),
                    critical_union: Vec::new(),
                    reinflated_feasible: None,
                    next_x: None,
                });
                return finish(instance, config, snapped, trace, false);
            }
        }

        let alpha: Vec<f64> = (0..n).map(|j| draw(phase, j)).collect();
        if let Some(bad) = alpha.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
            return Err(GspError::InvalidParameter(format!("draw {bad} is outside (0, 1]")));
        }
        let c_alpha = completions_for(&current, config.c, &alpha);
        if let Some(prev) = &previous {
            debug_assert!(
                prev.0.iter().zip(&c_alpha.0).all(|(p, c)| c >= p),
                "completion times moved earlier"
            );
        }
        let unsatisfied = unsatisfied_cuts(instance, &c_alpha);
        let valid = is_valid(instance, &unit, &c_alpha);
        debug_assert_eq!(unsatisfied.is_empty(), valid, "cover rows disagree with max-flow");
        if unsatisfied.is_empty() && valid {
            trace.push(PhaseRecord {
                phase,
                alpha,
                c_alpha: c_alpha.clone(),
                lp_int,
                lp_frac,
                snapped: false,
                cuts_violated: Vec::new(),
                critical: Vec::new(),
                closure_cuts: Vec::new(),
                critical_union: Vec::new(),
                reinflated_feasible: None,
                next_x: None,
            });
            return finish(instance, config, c_alpha, trace, false);
        }

        let mut in_union = vec![false; n];
        let mut critical = Vec::with_capacity(unsatisfied.len());
        for (b, d) in &unsatisfied {
            let sets = critical_jobs(instance, &current, *b, d);
            for &j in &sets.critical {
                in_union[j] = true;
            }
            critical.push(sets.critical);
        }
        let mut next = reinflate(&current, &c_alpha, &in_union);

        let mut closure_cuts = Vec::new();
        let mut feasible = None;
        if config.close_critical_sets {
            loop {
                let Some(cut) = separate(instance, &next, config.tol) else {
                    feasible = Some(true);
                    break;
                };
                let lifted: Vec<Time> = cut
                    .d
                    .iter()
                    .zip(&c_alpha.0)
                    .map(|(&d, &c)| d.max(c))
                    .collect();
                let mut added = false;
                if deficiency(instance, cut.b, &lifted) > 0 {
                    let sets = critical_jobs(instance, &current, cut.b, &lifted);
                    added = mark(&mut in_union, &sets.critical);
                    if !added {
                        added = mark(&mut in_union, &sets.support);
                    }
                }
                if !added {
                    feasible = Some(false);
                    break;
                }
                closure_cuts.push((cut.b, lifted));
                next = reinflate(&current, &c_alpha, &in_union);
            }
        } else if config.verify {
            feasible = Some(separate(instance, &next, config.tol).is_none());
        }

        trace.push(PhaseRecord {
            phase,
            alpha,
            c_alpha: c_alpha.clone(),
            lp_int,
            lp_frac,
            snapped: false,
            cuts_violated: unsatisfied,
            critical,
            closure_cuts,
            critical_union: (0..n).filter(|&j| in_union[j]).collect(),
            reinflated_feasible: feasible,
            next_x: Some(FractionalDigest::of(&next)),
        });
        previous = Some(c_alpha);
        current = next;
    }

    let completions = fallback_completions(instance, &current, &unit);
    finish(instance, config, completions, trace, true)
}

/// Sets `flags[j]` for each listed job; true if any flag was newly set.
fn mark(flags: &mut [bool], jobs: &[usize]) -> bool {
    let mut changed = false;
    for &j in jobs {
        changed |= !std::mem::replace(&mut flags[j], true);
    }
    changed
}

/// Deterministic repair: start from the last positive slot of each job and
/// push the job with the cheapest next step until the vector is valid.
pub fn fallback_completions(instance: &Instance, x: &FracSolution, unit: &Timeline) -> CompletionVector {
    let horizon = instance.horizon();
    let mut c: Vec<Time> = instance
        .jobs()
        .iter()
        .enumerate()
        .map(|(j, job)| x.last_positive(j).max(job.p))
        .collect();
    while !is_valid(instance, unit, &CompletionVector(c.clone())) {
        let j = (0..instance.n())
            .filter(|&j| c[j] < horizon)
            .min_by(|&p, &q| {
                let step = |j: usize| instance.job(j).marginal_cost(c[j] + 1);
                step(p).total_cmp(&step(q)).then(p.cmp(&q))
            })
            .expect("all jobs at the horizon is always valid");
        c[j] += 1;
    }
    CompletionVector(c)
}

fn finish(
    instance: &Instance,
    config: &RoundingConfig,
    completions: CompletionVector,
    trace: Vec<PhaseRecord>,
    fallback_used: bool,
) -> Result<RoundingOutcome> {
    let timeline = build_timeline(instance, config.grid);
    let rounded = completions.rounded_to(&timeline);
    let schedule = schedule_for(instance, &timeline, &rounded)?;
    let cost = instance.cost_of(rounded.as_slice());
    Ok(RoundingOutcome {
        completions,
        rounded,
        timeline,
        schedule,
        cost,
        trace,
        fallback_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::CostFn;

    fn instance_a() -> Instance {
        Instance::new(
            1,
            vec![
                (2, CostFn::WeightedCompletion { w: 1.0 }),
                (2, CostFn::WeightedCompletion { w: 1.0 }),
            ],
        )
        .unwrap()
    }

    fn tail() -> FracSolution {
        FracSolution::from_rows(vec![vec![1.0, 1.0, 0.5, 0.05]])
    }

    #[test]
    fn split_cost_examples() {
        let one = Instance::new(1, vec![(4, CostFn::WeightedCompletion { w: 1.0 })]).unwrap();
        let (int_part, frac_part) = split_cost(&one, &tail());
        assert_eq!(int_part, 2.0);
        assert!((frac_part - 0.55).abs() < 1e-12);

        let a = instance_a();
        let x = FracSolution::from_completions(&[2, 4], 4);
        assert_eq!(split_cost(&a, &x), (6.0, 0.0));
        let full = FracSolution::from_completions(&[4, 4], 4);
        assert_eq!(split_cost(&a, &full), (8.0, 0.0));
    }

    #[test]
    fn threshold_examples() {
        let x = tail();
        assert_eq!(completions_for(&x, 0.1, &[0.4]).0, vec![4]);
        assert_eq!(completions_for(&x, 0.1, &[1.0]).0, vec![3]);
        let integral = FracSolution::from_completions(&[2, 3], 4);
        let mut rng = Pcg64::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(sample(&integral, 0.1, &mut rng).1 .0, vec![2, 3]);
        }
    }

    #[test]
    fn integralize_examples() {
        for c in [[2, 4], [4, 4], [2, 2]] {
            let x = integralize(&CompletionVector(c.to_vec()), 4);
            for (j, &cj) in c.iter().enumerate() {
                for t in 1..=4 {
                    assert_eq!(x.get(j, t), if t <= cj { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn unsatisfied_examples() {
        let a = instance_a();
        let bs: Vec<Time> = unsatisfied_cuts(&a, &CompletionVector(vec![2, 2]))
            .into_iter()
            .map(|(b, _)| b)
            .collect();
        // b = 4: cover 1, E = {4} lies past D = 2, so V = 1 as well
        assert_eq!(bs, vec![2, 3, 4]);
        assert_eq!(deficiency(&a, 2, &[2, 2]), 1);
        assert_eq!(deficiency(&a, 3, &[2, 2]), 2);
        assert_eq!(deficiency(&a, 1, &[2, 2]), 0);
        assert!(unsatisfied_cuts(&a, &CompletionVector(vec![2, 4])).is_empty());
        assert!(unsatisfied_cuts(&a, &CompletionVector(vec![4, 4])).is_empty());
    }

    #[test]
    fn critical_prefix_rule() {
        let four = [(0, 1, 3.0), (1, 2, 3.0), (2, 3, 3.0), (3, 4, 3.0)];
        let sets = critical_from_masses(&four, 10.0);
        assert_eq!(sets.high, vec![3]);
        assert_eq!(sets.low, vec![0]);
        assert_eq!(sets.critical, vec![1, 2]);
        assert!(!sets.fallback);

        let single = critical_from_masses(&[(0, 1, 0.5)], 10.0);
        assert_eq!(single.low, vec![0]);
        assert_eq!(single.high, vec![0]);
        assert!(single.fallback);
        assert_eq!(single.critical, vec![0]);

        let two = critical_from_masses(&[(0, 1, 1.5), (1, 2, 8.0)], 10.0);
        assert_eq!(two.low, vec![0]);
        assert_eq!(two.high, vec![1]);
        assert!(two.fallback);
        assert_eq!(two.critical, vec![0, 1]);
    }

    #[test]
    fn critical_ties_break_by_id() {
        let sets = critical_from_masses(&[(2, 5, 2.0), (0, 5, 2.0), (1, 5, 2.0)], 10.0);
        assert_eq!(sets.low, vec![0]);
        assert_eq!(sets.high, vec![0]);
        assert_eq!(sets.critical, vec![1, 2]);
    }

    #[test]
    fn reinflate_examples() {
        let x = FracSolution::from_rows(vec![vec![1.0, 1.0, 0.05, 0.02]]);
        let c = CompletionVector(vec![2]);
        let up = reinflate(&x, &c, &[true]);
        assert_eq!(up.row(0)[..2], [1.0, 1.0]);
        assert!((up.get(0, 3) - 0.5).abs() < 1e-12);
        assert!((up.get(0, 4) - 0.2).abs() < 1e-12);
        assert_eq!(reinflate(&x, &c, &[false]).row(0), &[1.0, 1.0, 0.0, 0.0]);

        let big = FracSolution::from_rows(vec![vec![1.0, 1.0, 0.2, 0.2]]);
        let clipped = reinflate(&big, &c, &[true]);
        assert_eq!(clipped.row(0), &[1.0, 1.0, 1.0, 1.0]);
        assert!(clipped.is_monotone(0.0));
    }

    #[test]
    fn integral_valid_input_returns_unchanged() {
        let a = instance_a();
        let x = FracSolution::from_completions(&[2, 4], 4);
        let cfg = RoundingConfig {
            c: 0.1,
            ..RoundingConfig::for_instance(&a)
        };
        let out = run_from(&a, &x, &cfg).unwrap();
        assert_eq!(out.completions.0, vec![2, 4]);
        assert_eq!(out.phases(), 1);
        assert!(!out.fallback_used);
        assert_eq!(out.cost, 6.0);
    }

    #[test]
    fn instance_a_end_to_end() {
        let a = instance_a();
        for seed in 0..20 {
            let cfg = RoundingConfig {
                c: 0.1,
                seed,
                verify: true,
                ..RoundingConfig::for_instance(&a)
            };
            let out = run(&a, &cfg).unwrap();
            assert!(is_valid(&a, &Timeline::unit(4), &out.completions));
            assert!(out.cost >= 6.0 - 1e-9);
        }
    }

    #[test]
    fn tiny_tail_is_snapped() {
        let one = Instance::new(1, vec![(2, CostFn::WeightedCompletion { w: 1.0 })]).unwrap();
        // 1/(P n)^2 = 1/4; the tail is well below it
        let x = FracSolution::from_rows(vec![vec![1.0, 1.0]]);
        let cfg = RoundingConfig {
            c: 0.1,
            ..RoundingConfig::for_instance(&one)
        };
        assert!(!run_from(&one, &x, &cfg).unwrap().snapped());

        let two = Instance::new(
            1,
            vec![
                (2, CostFn::WeightedCompletion { w: 1.0 }),
                (1, CostFn::WeightedCompletion { w: 1.0 }),
            ],
        )
        .unwrap();
        // p_max * n = 4, threshold 1/16; x is feasible because the 0/1 part is
        let x = FracSolution::from_rows(vec![vec![1.0, 1.0, 0.01], vec![1.0, 1.0, 1.0]]);
        let out = run_from(&two, &x, &cfg).unwrap();
        assert!(out.snapped());
        assert_eq!(out.completions.0, vec![2, 3]);
    }

    #[test]
    fn zero_phases_uses_fallback() {
        let a = instance_a();
        let cfg = RoundingConfig {
            max_phases: 0,
            ..RoundingConfig::for_instance(&a)
        };
        let out = run(&a, &cfg).unwrap();
        assert!(out.fallback_used);
        assert!(out.trace.is_empty());
        assert!(is_valid(&a, &Timeline::unit(4), &out.completions));
    }

    #[test]
    fn config_rejects_large_c() {
        let a = instance_a();
        let cfg = RoundingConfig {
            c: 0.5,
            ..RoundingConfig::for_instance(&a)
        };
        assert!(run(&a, &cfg).is_err());
        assert!(default_c(&a) <= 0.1);
    }
}
