//! The strengthened time-indexed LP and its job-cover inequalities.
//!
//! Variables `x[j][t]` (`t = 1..=H`) mean "job `j` is not yet finished at
//! slot `t`"; `x[j][0]` is the constant 1. A job-cover row is indexed by a
//! start time `b` (the slot set `T' = [b, H]`) and a vector `D` of per-job
//! times:
//!
//! ```text
//! cover(b)    = sum_j p_j - m * (b - 1)
//! E(b, j)     = earliest min(p_j, cover(b)) slots of [b, H]
//! V(b, D)     = cover(b) - sum_j |E(b, j) ∩ [0, D_j]|
//! E(b, D, j)  = earliest V(b, D) slots of E(b, j) after D_j
//! row:          sum_j sum_{t in E(b, D, j)} x[j][t] >= V(b, D)   (when V > 0)
//! ```

mod model;
mod separation;
pub mod simplex;

pub use model::{solve_lp, solve_lp_observed, LpModel, LpOptions, LpResult};
pub use separation::separate;

use serde::Serialize;

use crate::flow::CompletionVector;
use crate::instance::{Instance, Time};

/// Tolerance under which a value counts as exactly 0 or 1.
pub const INTEGRAL_TOL: f64 = 1e-9;

/// Default violation tolerance for separation.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Fractional LP state, one non-increasing row per job.
#[derive(Debug, Clone, PartialEq)]
pub struct FracSolution {
    horizon: Time,
    /// `rows[j][t - 1] = x[j][t]`
    rows: Vec<Vec<f64>>,
}

impl FracSolution {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let horizon = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == horizon),
            "all rows must span the horizon"
        );
        FracSolution { horizon, rows }
    }

    pub fn zeros(n: usize, horizon: Time) -> Self {
        FracSolution {
            horizon,
            rows: vec![vec![0.0; horizon]; n],
        }
    }

    /// The 0/1 solution that is 1 exactly up to each job's completion time.
    pub fn from_completions(completions: &[Time], horizon: Time) -> Self {
        let rows = completions
            .iter()
            .map(|&c| (1..=horizon).map(|t| if t <= c { 1.0 } else { 0.0 }).collect())
            .collect();
        FracSolution { horizon, rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn horizon(&self) -> Time {
        self.horizon
    }

    /// `x[j][t]`, with `x[j][0] = 1` and zero past the horizon.
    pub fn get(&self, j: usize, t: Time) -> f64 {
        if t == 0 {
            1.0
        } else {
            self.rows[j].get(t - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn set(&mut self, j: usize, t: Time, value: f64) {
        self.rows[j][t - 1] = value;
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.rows[j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn is_monotone(&self, tol: f64) -> bool {
        self.rows.iter().all(|row| {
            row.iter().all(|&v| (-tol..=1.0 + tol).contains(&v))
                && row.windows(2).all(|w| w[1] <= w[0] + tol)
        })
    }

    /// Latest `t` with `x[j][t] = 1` (0 if none).
    pub fn last_full(&self, j: usize) -> Time {
        self.rows[j]
            .iter()
            .rposition(|&v| v >= 1.0 - INTEGRAL_TOL)
            .map_or(0, |i| i + 1)
    }

    /// Latest `t` with `x[j][t] > 0` (0 if none).
    pub fn last_positive(&self, j: usize) -> Time {
        self.rows[j]
            .iter()
            .rposition(|&v| v > INTEGRAL_TOL)
            .map_or(0, |i| i + 1)
    }

    pub fn is_integral(&self) -> bool {
        self.fractional_entries().next().is_none()
    }

    /// `(j, t, value)` for every entry strictly between 0 and 1.
    pub fn fractional_entries(&self) -> impl Iterator<Item = (usize, Time, f64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(j, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v > INTEGRAL_TOL && v < 1.0 - INTEGRAL_TOL)
                .map(move |(i, &v)| (j, i + 1, v))
        })
    }

    /// The completion vector of a 0/1 solution: the last slot set to 1.
    pub fn completions(&self) -> CompletionVector {
        CompletionVector((0..self.n()).map(|j| self.last_full(j)).collect())
    }

    /// `sum_j sum_t x[j][t] * (g_j(t) - g_j(t-1))`.
    pub fn objective(&self, instance: &Instance) -> f64 {
        instance
            .jobs()
            .iter()
            .zip(&self.rows)
            .map(|(job, row)| {
                row.iter()
                    .enumerate()
                    .map(|(i, &v)| v * job.marginal_cost(i + 1))
                    .sum::<f64>()
            })
            .sum()
    }
}

/// A job-cover row `sum_j sum_{t in eligible[j]} x[j][t] >= deficiency`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutConstraint {
    pub b: Time,
    pub d: Vec<Time>,
    pub deficiency: i64,
    pub eligible: Vec<Vec<Time>>,
}

impl CutConstraint {
    /// The row for `(b, D)`, or `None` when it is vacuous (`V <= 0`).
    pub fn new(instance: &Instance, b: Time, d: &[Time]) -> Option<Self> {
        let v = deficiency(instance, b, d);
        if v <= 0 {
            return None;
        }
        let eligible = (0..instance.n())
            .map(|j| eligible_times(instance, b, d, j))
            .collect();
        Some(CutConstraint {
            b,
            d: d.to_vec(),
            deficiency: v,
            eligible,
        })
    }

    pub fn lhs(&self, x: &FracSolution) -> f64 {
        constraint_lhs(x, self)
    }

    /// `V - lhs`; positive when the row is violated.
    pub fn violation(&self, x: &FracSolution) -> f64 {
        self.deficiency as f64 - self.lhs(x)
    }
}

/// `sum_j p_j - m * (b - 1)`: work that must still be covered inside `[b, H]`.
pub fn cover_requirement(instance: &Instance, b: Time) -> i64 {
    instance.total_work() as i64 - (instance.machines() * (b - 1)) as i64
}

/// Number of slots in `E(b, j)`.
pub fn earliest_cap(instance: &Instance, b: Time, j: usize) -> usize {
    let cover = cover_requirement(instance, b);
    if cover <= 0 || b > instance.horizon() {
        return 0;
    }
    let room = instance.horizon() - b + 1;
    (instance.job(j).p.min(cover as usize)).min(room)
}

/// `E(b, j)`: the earliest `min(p_j, cover(b))` slots of `[b, H]`.
pub fn earliest_set(instance: &Instance, b: Time, j: usize) -> Vec<Time> {
    (b..b + earliest_cap(instance, b, j)).collect()
}

/// Number of slots of `E(b, j)` at or before `D_j`.
fn covered_prefix(instance: &Instance, b: Time, d_j: Time, j: usize) -> usize {
    let cap = earliest_cap(instance, b, j);
    if d_j < b {
        0
    } else {
        (d_j - b + 1).min(cap)
    }
}

/// `V(b, D)`; may be zero or negative, in which case the row is vacuous.
pub fn deficiency(instance: &Instance, b: Time, d: &[Time]) -> i64 {
    let covered: usize = (0..instance.n())
        .map(|j| covered_prefix(instance, b, d[j], j))
        .sum();
    cover_requirement(instance, b) - covered as i64
}

/// `E(b, D, j)`: the earliest `V(b, D)` slots of `E(b, j)` later than `D_j`.
pub fn eligible_times(instance: &Instance, b: Time, d: &[Time], j: usize) -> Vec<Time> {
    let v = deficiency(instance, b, d);
    if v <= 0 {
        return Vec::new();
    }
    earliest_set(instance, b, j)
        .into_iter()
        .filter(|&t| t > d[j])
        .take(v as usize)
        .collect()
}

/// `sum_j sum_{t in E(b, D, j)} x[j][t]`.
pub fn constraint_lhs(x: &FracSolution, cut: &CutConstraint) -> f64 {
    cut.eligible
        .iter()
        .enumerate()
        .map(|(j, times)| times.iter().map(|&t| x.get(j, t)).sum::<f64>())
        .sum()
}

/// The `D = 0` rows for every start time with positive cover requirement.
pub fn seed_cuts(instance: &Instance) -> Vec<CutConstraint> {
    let zero = vec![0; instance.n()];
    (1..=instance.horizon())
        .filter_map(|b| CutConstraint::new(instance, b, &zero))
        .collect()
}
