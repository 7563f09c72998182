//! Dynamic-programming separation oracle for the job-cover rows.
//!
//! For a fixed start time `b` only the number `k_j = |E(b, j) ∩ [0, D_j]|`
//! matters, so `D_j` is canonically `0` (k = 0) or the `k`-th slot of
//! `E(b, j)`. Guessing the deficiency `G` fixes `sum_j k_j = cover(b) - G`,
//! and each job then contributes the mass of slots `k .. min(k + G, cap_j)` of
//! `E(b, j)`. The DP minimises that mass over all `k` vectors with the right
//! sum; a row is violated iff the minimum is below `G`.

use super::{cover_requirement, earliest_cap, CutConstraint, FracSolution};
use crate::instance::{Instance, Time};

const TIE_EPS: f64 = 1e-12;

struct Candidate {
    violation: f64,
    b: Time,
    d: Vec<Time>,
}

impl Candidate {
    /// Larger violation wins; ties go to smaller `b`, then smaller `D`.
    fn beats(&self, other: &Candidate) -> bool {
        if self.violation > other.violation + TIE_EPS {
            return true;
        }
        if self.violation < other.violation - TIE_EPS {
            return false;
        }
        (self.b, &self.d) < (other.b, &other.d)
    }
}

/// Returns the most violated job-cover row (violation `> tol`), or `None`
/// when `x` satisfies every row.
pub fn separate(instance: &Instance, x: &FracSolution, tol: f64) -> Option<CutConstraint> {
    let n = instance.n();
    let mut best: Option<Candidate> = None;

    for b in 1..=instance.horizon() {
        let cover = cover_requirement(instance, b);
        if cover <= 0 {
            break;
        }
        let cover = cover as usize;
        let caps: Vec<usize> = (0..n).map(|j| earliest_cap(instance, b, j)).collect();
        // prefix[j][k] = mass of the first k slots of E(b, j)
        let prefix: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                let mut acc = vec![0.0; caps[j] + 1];
                for k in 0..caps[j] {
                    acc[k + 1] = acc[k] + x.get(j, b + k);
                }
                acc
            })
            .collect();
        let total_cap: usize = caps.iter().sum();

        for guess in 1..=cover {
            let target = cover - guess;
            if target > total_cap {
                continue;
            }
            let mass = |j: usize, k: usize| -> f64 {
                prefix[j][(k + guess).min(caps[j])] - prefix[j][k]
            };
            // suffix[i][l]: min mass of jobs i.. with sum of k equal to l
            let mut suffix = vec![vec![f64::INFINITY; target + 1]; n + 1];
            suffix[n][0] = 0.0;
            for i in (0..n).rev() {
                for l in 0..=target {
                    let mut best_here = f64::INFINITY;
                    for k in 0..=caps[i].min(l) {
                        let rest = suffix[i + 1][l - k];
                        if rest.is_finite() {
                            best_here = best_here.min(mass(i, k) + rest);
                        }
                    }
                    suffix[i][l] = best_here;
                }
            }
            let min_mass = suffix[0][target];
            if min_mass.is_nan() || min_mass >= guess as f64 - tol {
                continue;
            }
            // smallest k per job, front to back, gives the lexicographically smallest D
            let mut d = Vec::with_capacity(n);
            let mut left = target;
            for i in 0..n {
                let goal = suffix[i][left];
                let k = (0..=caps[i].min(left))
                    .find(|&k| {
                        let rest = suffix[i + 1][left - k];
                        rest.is_finite() && mass(i, k) + rest <= goal + TIE_EPS
                    })
                    .expect("dp minimum is attained");
                d.push(if k == 0 { 0 } else { b + k - 1 });
                left -= k;
            }
            let candidate = Candidate {
                violation: guess as f64 - min_mass,
                b,
                d,
            };
            if best.as_ref().is_none_or(|cur| candidate.beats(cur)) {
                best = Some(candidate);
            }
        }
    }

    best.map(|c| {
        let cut = CutConstraint::new(instance, c.b, &c.d).expect("violated row has V > 0");
        debug_assert!(cut.violation(x) > tol);
        cut
    })
}
