use super::simplex::{DenseLp, Sense};
use super::{separate, seed_cuts, CutConstraint, FracSolution, DEFAULT_TOL, INTEGRAL_TOL};
use crate::error::{GspError, Result};
use crate::instance::Instance;

/// The restricted LP: objective `marginal_cost(j, t)` on `x[j][t]`,
/// monotonicity and `[0, 1]` bounds on each row, plus the accumulated
/// job-cover rows.
///
/// The simplex works on completion-probability variables
/// `z[j][s] = x[j][s] - x[j][s+1] >= 0` with `sum_s z[j][s] <= 1`. Monotonicity
/// and the box bounds then hold by construction, `x[j][t] = sum_{s >= t} z[j][s]`,
/// and the objective telescopes to `sum z[j][s] * g_j(s)`.
#[derive(Debug, Clone)]
pub struct LpModel {
    costs: Vec<Vec<f64>>,
    completion_costs: Vec<Vec<f64>>,
    cuts: Vec<CutConstraint>,
}

impl LpModel {
    /// Model with every `D = 0` row already present.
    pub fn new(instance: &Instance) -> Self {
        let horizon = instance.horizon();
        let costs = instance
            .jobs()
            .iter()
            .map(|job| (1..=horizon).map(|t| job.marginal_cost(t)).collect())
            .collect();
        let completion_costs = instance
            .jobs()
            .iter()
            .map(|job| (1..=horizon).map(|t| job.cost.eval(t)).collect())
            .collect();
        LpModel {
            costs,
            completion_costs,
            cuts: seed_cuts(instance),
        }
    }

    /// Objective coefficient of `x[j][t]`.
    pub fn cost(&self, j: usize, t: usize) -> f64 {
        self.costs[j][t - 1]
    }

    pub fn cuts(&self) -> &[CutConstraint] {
        &self.cuts
    }

    pub fn add_cut(&mut self, cut: CutConstraint) {
        self.cuts.push(cut);
    }

    fn n(&self) -> usize {
        self.costs.len()
    }

    fn horizon(&self) -> usize {
        self.costs.first().map_or(0, Vec::len)
    }

    fn to_dense(&self) -> DenseLp {
        let (n, h) = (self.n(), self.horizon());
        let var = |j: usize, s: usize| j * h + (s - 1);
        let mut lp = DenseLp::new(n * h);
        for j in 0..n {
            for s in 1..=h {
                lp.objective[var(j, s)] = self.completion_costs[j][s - 1];
            }
            lp.add_row((1..=h).map(|s| (var(j, s), 1.0)).collect(), Sense::Le, 1.0);
        }
        for cut in &self.cuts {
            let mut coeffs = Vec::new();
            for (j, times) in cut.eligible.iter().enumerate() {
                for s in 1..=h {
                    // x[j][t] for t <= s all contain z[j][s]
                    let hits = times.iter().filter(|&&t| t <= s).count();
                    if hits > 0 {
                        coeffs.push((var(j, s), hits as f64));
                    }
                }
            }
            lp.add_row(coeffs, Sense::Ge, cut.deficiency as f64);
        }
        lp
    }

    /// Optimal solution of the current restricted LP.
    pub fn solve(&self) -> Result<FracSolution> {
        let (n, h) = (self.n(), self.horizon());
        let opt = self.to_dense().solve()?;
        let rows = (0..n)
            .map(|j| {
                let z = &opt.x[j * h..(j + 1) * h];
                let mut row = vec![0.0; h];
                let mut acc = 0.0;
                for s in (0..h).rev() {
                    acc += z[s].max(0.0);
                    row[s] = clean(acc);
                }
                row
            })
            .collect();
        Ok(FracSolution::from_rows(rows))
    }
}

fn clean(v: f64) -> f64 {
    if v < INTEGRAL_TOL {
        0.0
    } else if v > 1.0 - INTEGRAL_TOL {
        1.0
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Rows violated by at most this much count as satisfied.
    pub tol: f64,
    /// Separation rounds allowed before giving up; `None` means `10 * n * H`.
    pub max_cuts: Option<usize>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            tol: DEFAULT_TOL,
            max_cuts: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub x: FracSolution,
    pub value: f64,
    /// Rows added by separation, on top of the `D = 0` seed rows.
    pub cuts_added: usize,
    pub cuts: Vec<CutConstraint>,
}

/// Cutting-plane solve of the strengthened LP.
pub fn solve_lp(instance: &Instance, options: &LpOptions) -> Result<LpResult> {
    solve_lp_observed(instance, options, |_| {})
}

/// As [`solve_lp`], calling `observe` on every intermediate LP solution
/// before it is separated.
pub fn solve_lp_observed(
    instance: &Instance,
    options: &LpOptions,
    mut observe: impl FnMut(&FracSolution),
) -> Result<LpResult> {
    let ceiling = options
        .max_cuts
        .unwrap_or(10 * instance.n() * instance.horizon());
    let mut model = LpModel::new(instance);
    let mut cuts_added = 0;
    loop {
        let x = model.solve()?;
        observe(&x);
        match separate(instance, &x, options.tol) {
            None => {
                let value = x.objective(instance);
                return Ok(LpResult {
                    x,
                    value,
                    cuts_added,
                    cuts: model.cuts,
                });
            }
            Some(cut) => {
                if cuts_added >= ceiling {
                    return Err(GspError::NonConvergence(ceiling));
                }
                model.add_cut(cut);
                cuts_added += 1;
            }
        }
    }
}
