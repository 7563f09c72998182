//! Ground-truth engines for small instances.
//!
//! None of these share code paths with the solver: schedulability is decided
//! by searching slot assignments directly, and the naive separation evaluates
//! the cover-row definitions literally over every `(b, D)`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{GspError, Result};
use crate::flow::{is_valid, CompletionVector};
use crate::instance::{Instance, Time};
use crate::lp::FracSolution;
use crate::timeline::Timeline;

pub const BRUTE_MAX_JOBS: usize = 6;
pub const BRUTE_MAX_HORIZON: usize = 12;
pub const SLOT_MAX_JOBS: usize = 3;
pub const SLOT_MAX_HORIZON: usize = 9;
pub const SLOT_MAX_MACHINES: usize = 2;
pub const NAIVE_MAX_JOBS: usize = 3;
pub const NAIVE_MAX_HORIZON: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub opt_cost: f64,
    pub opt_completions: CompletionVector,
    pub nodes: u64,
}

fn guard(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(GspError::GuardExceeded(what()))
    }
}

/// Exhaustive minimum of `sum_j g_j(C_j)` over valid completion vectors.
/// Vectors are visited in lexicographic order and only strict improvements
/// replace the incumbent, so ties resolve to the lexicographically smallest.
pub fn brute_force_opt(instance: &Instance) -> Result<OracleResult> {
    let (n, h) = (instance.n(), instance.horizon());
    guard(n <= BRUTE_MAX_JOBS && h <= BRUTE_MAX_HORIZON, || {
        format!("brute force needs n <= {BRUTE_MAX_JOBS} and H <= {BRUTE_MAX_HORIZON}, got n = {n}, H = {h}")
    })?;
    let unit = Timeline::unit(h);
    // cheapest possible cost of jobs i.. (each at its own processing time)
    let mut floor = vec![0.0; n + 1];
    for i in (0..n).rev() {
        let job = instance.job(i);
        floor[i] = floor[i + 1] + job.cost.eval(job.p);
    }
    let mut search = BruteSearch {
        instance,
        unit: &unit,
        floor,
        current: vec![0; n],
        best: None,
        nodes: 0,
    };
    search.descend(0, 0.0);
    let (opt_cost, completions) = search.best.expect("C_j = H for all j is always valid");
    Ok(OracleResult {
        opt_cost,
        opt_completions: CompletionVector(completions),
        nodes: search.nodes,
    })
}

struct BruteSearch<'a> {
    instance: &'a Instance,
    unit: &'a Timeline,
    floor: Vec<f64>,
    current: Vec<Time>,
    best: Option<(f64, Vec<Time>)>,
    nodes: u64,
}

impl BruteSearch<'_> {
    fn descend(&mut self, i: usize, partial: f64) {
        self.nodes += 1;
        let n = self.instance.n();
        if i == n {
            if is_valid(self.instance, self.unit, &CompletionVector(self.current.clone())) {
                self.best = Some((partial, self.current.clone()));
            }
            return;
        }
        let job = self.instance.job(i);
        for c in job.p..=self.instance.horizon() {
            let cost = partial + job.cost.eval(c);
            if let Some((best, _)) = &self.best {
                if cost + self.floor[i + 1] >= *best {
                    // costs are non-decreasing in c, so later c cannot help either
                    break;
                }
            }
            self.current[i] = c;
            self.descend(i + 1, cost);
        }
    }
}

/// Decides schedulability by searching per-slot machine assignments: each
/// slot runs at most `m` distinct unfinished jobs whose deadline has not passed.
pub fn slot_schedulability(instance: &Instance, completions: &[Time]) -> Result<bool> {
    let (n, h, m) = (instance.n(), instance.horizon(), instance.machines());
    guard(
        n <= SLOT_MAX_JOBS && h <= SLOT_MAX_HORIZON && m <= SLOT_MAX_MACHINES,
        || format!("slot search needs n <= {SLOT_MAX_JOBS}, H <= {SLOT_MAX_HORIZON}, m <= {SLOT_MAX_MACHINES}"),
    )?;
    if completions.len() != n {
        return Err(GspError::InvalidCompletions(format!(
            "expected {n} completion times, got {}",
            completions.len()
        )));
    }
    let remaining: Vec<usize> = instance.jobs().iter().map(|j| j.p).collect();
    let mut dead = HashSet::new();
    Ok(slot_search(1, &remaining, completions, m, h, &mut dead))
}

fn slot_search(
    t: Time,
    remaining: &[usize],
    deadline: &[Time],
    m: usize,
    horizon: Time,
    dead: &mut HashSet<(Time, Vec<usize>)>,
) -> bool {
    if remaining.iter().all(|&r| r == 0) {
        return true;
    }
    if t > horizon {
        return false;
    }
    // a job needs at least `r` slots in t..=deadline
    for (j, &r) in remaining.iter().enumerate() {
        if r > 0 && (deadline[j] < t || r > deadline[j] - t + 1) {
            return false;
        }
    }
    let key = (t, remaining.to_vec());
    if dead.contains(&key) {
        return false;
    }
    let ready: Vec<usize> = (0..remaining.len()).filter(|&j| remaining[j] > 0).collect();
    // try larger subsets first; idling a machine is never forced but allowed
    let mut found = false;
    for size in (0..=m.min(ready.len())).rev() {
        for subset in subsets(&ready, size) {
            let mut next = remaining.to_vec();
            for &j in &subset {
                next[j] -= 1;
            }
            if slot_search(t + 1, &next, deadline, m, horizon, dead) {
                found = true;
                break;
            }
        }
        if found {
            break;
        }
    }
    if !found {
        dead.insert(key);
    }
    found
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if items.len() < size {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], size - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaiveCut {
    pub b: Time,
    pub d: Vec<Time>,
    pub deficiency: i64,
    pub violation: f64,
}

/// Scans every `b in 1..=H` and every `D in {0..=H}^n`, evaluating the row
/// definitions with plain set operations, and returns the most violated row
/// (violation `> tol`). Ties go to the first in `(b, D)` lexicographic order.
pub fn naive_separation(instance: &Instance, x: &FracSolution, tol: f64) -> Result<Option<NaiveCut>> {
    let (n, h) = (instance.n(), instance.horizon());
    guard(n <= NAIVE_MAX_JOBS && h <= NAIVE_MAX_HORIZON, || {
        format!("naive separation needs n <= {NAIVE_MAX_JOBS} and H <= {NAIVE_MAX_HORIZON}")
    })?;
    let m = instance.machines() as i64;
    let total = instance.total_work() as i64;
    let all_slots: Vec<Time> = (1..=h).collect();
    let mut best: Option<NaiveCut> = None;

    for b in 1..=h {
        let inside: Vec<Time> = all_slots.iter().copied().filter(|&t| t >= b).collect();
        let outside = (all_slots.len() - inside.len()) as i64;
        let cap = total - m * outside;
        let earliest: Vec<Vec<Time>> = instance
            .jobs()
            .iter()
            .map(|job| {
                let take = (job.p as i64).min(cap).max(0) as usize;
                inside.iter().copied().take(take).collect()
            })
            .collect();

        let mut d = vec![0; n];
        loop {
            let counted: i64 = (0..n)
                .map(|j| earliest[j].iter().filter(|&&t| t <= d[j]).count() as i64)
                .sum();
            let v = total - m * outside - counted;
            if v > 0 {
                let lhs: f64 = (0..n)
                    .map(|j| {
                        earliest[j]
                            .iter()
                            .filter(|&&t| t > d[j])
                            .take(v as usize)
                            .map(|&t| x.get(j, t))
                            .sum::<f64>()
                    })
                    .sum();
                let violation = v as f64 - lhs;
                let improves = match &best {
                    None => violation > tol,
                    Some(cur) => violation > cur.violation + 1e-12,
                };
                if improves {
                    best = Some(NaiveCut {
                        b,
                        d: d.clone(),
                        deficiency: v,
                        violation,
                    });
                }
            }
            // odometer over {0..=H}^n, last coordinate fastest
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if d[pos] < h {
                    d[pos] += 1;
                    for later in d.iter_mut().skip(pos + 1) {
                        *later = 0;
                    }
                    break;
                }
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    Ok(best)
}

/// Wrap-around rule for a common deadline: feasible iff `sum p <= m B` and `max p <= B`.
pub fn mcnaughton_feasible(instance: &Instance, deadline: Time) -> bool {
    instance.total_work() <= instance.machines() * deadline && instance.p_max() <= deadline
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineCosts {
    /// Weighted-shortest-processing-time list scheduling.
    pub wspt: f64,
    /// Earliest-deadline-first list scheduling; only when every job has a deadline.
    pub edf: Option<f64>,
}

/// Non-preemptive list schedule: each job in `order` goes to the machine
/// that frees up first (lowest id on ties).
pub fn list_schedule(instance: &Instance, order: &[usize]) -> Vec<Time> {
    let mut free = vec![0; instance.machines()];
    let mut completions = vec![0; instance.n()];
    for &j in order {
        let (k, &start) = free
            .iter()
            .enumerate()
            .min_by_key(|&(k, &f)| (f, k))
            .expect("at least one machine");
        completions[j] = start + instance.job(j).p;
        free[k] = completions[j];
    }
    completions
}

pub fn baseline_heuristics(instance: &Instance) -> BaselineCosts {
    let ids: Vec<usize> = (0..instance.n()).collect();

    let mut wspt_order = ids.clone();
    let ratio = |j: usize| {
        let job = instance.job(j);
        let w = job.cost.weight();
        if w > 0.0 {
            job.p as f64 / w
        } else {
            f64::INFINITY
        }
    };
    wspt_order.sort_by(|&a, &b| ratio(a).total_cmp(&ratio(b)).then(a.cmp(&b)));
    let wspt = instance.cost_of(&list_schedule(instance, &wspt_order));

    let deadlines: Option<Vec<f64>> = instance.jobs().iter().map(|j| j.cost.deadline()).collect();
    let edf = deadlines.map(|d| {
        let mut order = ids.clone();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
        instance.cost_of(&list_schedule(instance, &order))
    });
    BaselineCosts { wspt, edf }
}
