//! Dense two-phase tableau simplex for small LPs.
//!
//! Solves `min c.x` subject to `A x {<=, >=, =} b`, `x >= 0`. Entering columns
//! use Dantzig's rule and switch to Bland's rule after a run of degenerate
//! pivots, so the method cannot cycle.

use crate::error::{GspError, Result};

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-10;
const FEAS_EPS: f64 = 1e-7;
const DEGENERATE_SWITCH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default)]
pub struct DenseLp {
    pub n_vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone)]
pub struct LpOptimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub pivots: usize,
}

impl DenseLp {
    pub fn new(n_vars: usize) -> Self {
        DenseLp {
            n_vars,
            objective: vec![0.0; n_vars],
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        self.rows.push(LpRow { coeffs, sense, rhs });
    }

    /// Largest violation of any row or sign bound at `x`.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            let r = match row.sense {
                Sense::Le => lhs - row.rhs,
                Sense::Ge => row.rhs - lhs,
                Sense::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(r);
        }
        worst
    }

    pub fn solve(&self) -> Result<LpOptimum> {
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    /// rows x (cols + 1); the last column is the right-hand side
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    n_vars: usize,
    first_artificial: usize,
    pivots: usize,
    max_pivots: usize,
}

type SparseRow = (Vec<(usize, f64)>, Sense, f64);

impl Tableau {
    fn build(lp: &DenseLp) -> Self {
        let m = lp.rows.len();
        // normalise to non-negative right-hand sides
        let rows: Vec<SparseRow> = lp
            .rows
            .iter()
            .map(|r| {
                if r.rhs < 0.0 {
                    let flipped = match r.sense {
                        Sense::Le => Sense::Ge,
                        Sense::Ge => Sense::Le,
                        Sense::Eq => Sense::Eq,
                    };
                    let coeffs = r.coeffs.iter().map(|&(j, a)| (j, -a)).collect();
                    (coeffs, flipped, -r.rhs)
                } else {
                    (r.coeffs.clone(), r.sense, r.rhs)
                }
            })
            .collect();
        let n_slack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Sense::Le).count();
        let first_slack = lp.n_vars;
        let first_artificial = first_slack + n_slack;
        let cols = first_artificial + n_art;

        let mut a = vec![vec![0.0; cols + 1]; m];
        let mut basis = vec![0; m];
        let (mut slack, mut art) = (first_slack, first_artificial);
        for (i, (coeffs, sense, rhs)) in rows.into_iter().enumerate() {
            for (j, v) in coeffs {
                a[i][j] += v;
            }
            a[i][cols] = rhs;
            match sense {
                Sense::Le => {
                    a[i][slack] = 1.0;
                    basis[i] = slack;
                    slack += 1;
                }
                Sense::Ge => {
                    a[i][slack] = -1.0;
                    slack += 1;
                    a[i][art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                Sense::Eq => {
                    a[i][art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        Tableau {
            a,
            basis,
            cols,
            n_vars: lp.n_vars,
            first_artificial,
            pivots: 0,
            max_pivots: 50_000 + 50 * (m + cols),
        }
    }

    fn solve(mut self, lp: &DenseLp) -> Result<LpOptimum> {
        if self.first_artificial < self.cols {
            let mut phase1 = vec![0.0; self.cols];
            phase1[self.first_artificial..].iter_mut().for_each(|c| *c = 1.0);
            self.optimize(&phase1, self.cols)?;
            let infeasibility: f64 = self
                .basis
                .iter()
                .zip(&self.a)
                .filter(|(&b, _)| b >= self.first_artificial)
                .map(|(_, row)| row[self.cols])
                .sum();
            if infeasibility > FEAS_EPS {
                return Err(GspError::LpInfeasible);
            }
            self.drive_out_artificials();
        }
        let mut cost = vec![0.0; self.cols];
        cost[..self.n_vars].copy_from_slice(&lp.objective);
        self.optimize(&cost, self.first_artificial)?;

        let mut x = vec![0.0; self.n_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_vars {
                x[b] = self.a[i][self.cols].max(0.0);
            }
        }
        let value = x.iter().zip(&lp.objective).map(|(v, c)| v * c).sum();
        Ok(LpOptimum {
            x,
            value,
            pivots: self.pivots,
        })
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` for the current basis.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (dj, aij) in d.iter_mut().zip(&self.a[i]) {
                    *dj -= cb * aij;
                }
            }
        }
        d
    }

    /// Primal simplex over columns `< allowed`.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<()> {
        let mut d = self.reduced_costs(cost);
        let mut degenerate_run = 0;
        loop {
            let bland = degenerate_run >= DEGENERATE_SWITCH;
            let entering = if bland {
                (0..allowed).find(|&j| d[j] < -COST_EPS)
            } else {
                (0..allowed)
                    .filter(|&j| d[j] < -COST_EPS)
                    .min_by(|&p, &q| d[p].total_cmp(&d[q]))
            };
            let Some(col) = entering else {
                return Ok(());
            };

            let rhs = self.cols;
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[col] > PIVOT_EPS {
                    let ratio = row[rhs] / row[col];
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - 1e-12
                                || (ratio <= lr + 1e-12 && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, ratio)) = leave else {
                return Err(GspError::LpUnbounded);
            };
            degenerate_run = if ratio <= 1e-12 { degenerate_run + 1 } else { 0 };
            self.pivot(row, col);
            let factor = d[col];
            for (dj, aij) in d.iter_mut().zip(&self.a[row]) {
                *dj -= factor * aij;
            }
            if self.pivots > self.max_pivots {
                return Err(GspError::LpIterationLimit(self.pivots));
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        self.pivots += 1;
        let p = self.a[row][col];
        for v in self.a[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = std::mem::take(&mut self.a[row]);
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                r[col] = 0.0;
            }
        }
        self.a[row] = pivot_row;
        self.basis[row] = col;
    }

    /// After phase one, pivot zero-level artificials out of the basis; rows
    /// where that is impossible are redundant and dropped.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= self.first_artificial {
                let col = (0..self.first_artificial).find(|&j| self.a[i][j].abs() > PIVOT_EPS);
                match col {
                    Some(col) => self.pivot(i, col),
                    None => {
                        self.a.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}
