//! End-to-end solve: LP bound, rounding, schedule validation, and the run report.

use serde::Serialize;

use crate::error::{GspError, Result};
use crate::flow::validate_schedule;
use crate::instance::Instance;
use crate::lp::{solve_lp, LpOptions, LpResult};
use crate::oracle::{brute_force_opt, BRUTE_MAX_HORIZON, BRUTE_MAX_JOBS};
use crate::rounding::{run_from, RoundingConfig, RoundingOutcome};

/// Summary of one solver run. Ratios are `None` when the denominator is zero
/// and the numerator is not.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub format: u32,
    pub digest: String,
    pub lp_value: f64,
    pub alg_cost: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_cost: Option<f64>,
    pub ratio_alg_lp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_alg_brute: Option<f64>,
    pub phases: usize,
    pub cuts_added: usize,
    pub seed: u64,
    pub fallback_used: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl RunReport {
    /// `alg >= lp`, and with a brute-force value also `alg >= brute >= lp`, all up to `tol`.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let fail = |what: String| Err(GspError::InconsistentFlow(format!("report invariant: {what}")));
        if self.alg_cost < self.lp_value - tol {
            return fail(format!("alg_cost {} < lp_value {}", self.alg_cost, self.lp_value));
        }
        if let Some(brute) = self.brute_cost {
            if self.alg_cost < brute - tol {
                return fail(format!("alg_cost {} < brute_cost {brute}", self.alg_cost));
            }
            if brute < self.lp_value - tol {
                return fail(format!("brute_cost {brute} < lp_value {}", self.lp_value));
            }
        }
        Ok(())
    }
}

pub fn ratio(num: f64, den: f64, tol: f64) -> Option<f64> {
    if den > tol {
        Some(num / den)
    } else if num.abs() <= tol {
        Some(1.0)
    } else {
        None
    }
}

/// Whether the brute-force oracle accepts this instance.
pub fn brute_applicable(instance: &Instance) -> bool {
    instance.n() <= BRUTE_MAX_JOBS && instance.horizon() <= BRUTE_MAX_HORIZON
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub report: RunReport,
    pub lp: LpResult,
    pub outcome: RoundingOutcome,
}

/// LP, rounding and schedule validation; optionally the brute-force optimum
/// when the instance is small enough. Fails if the schedule does not
/// validate or the report violates its ordering invariants.
pub fn solve(instance: &Instance, config: &RoundingConfig, with_brute: bool) -> Result<Solved> {
    let lp = solve_lp(
        instance,
        &LpOptions {
            tol: config.tol,
            ..LpOptions::default()
        },
    )?;
    let outcome = run_from(instance, &lp.x, config)?;
    let check = validate_schedule(instance, &outcome.timeline, &outcome.rounded, &outcome.schedule);
    if let Some(v) = check.violation {
        return Err(GspError::InconsistentFlow(format!("emitted schedule is invalid: {v}")));
    }
    let brute_cost = if with_brute && brute_applicable(instance) {
        Some(brute_force_opt(instance)?.opt_cost)
    } else {
        None
    };
    let report = RunReport {
        format: 1,
        digest: instance.digest(),
        lp_value: lp.value,
        alg_cost: outcome.cost,
        brute_cost,
        ratio_alg_lp: ratio(outcome.cost, lp.value, config.tol),
        ratio_alg_brute: brute_cost.and_then(|b| ratio(outcome.cost, b, config.tol)),
        phases: outcome.phases(),
        cuts_added: lp.cuts_added,
        seed: config.seed,
        fallback_used: outcome.fallback_used,
        wall_ms: None,
    };
    report.check_invariants(config.tol)?;
    Ok(Solved { report, lp, outcome })
}
