//! Jobs, cost functions and problem instances.
//!
//! An instance is a set of jobs with integer processing times, to be scheduled
//! preemptively (with migration) on `m` identical machines. Each job carries a
//! non-negative, non-decreasing cost function of its completion time with
//! `g(0) = 0`. Time is slotted: slot `t` covers the half-open interval
//! `(t-1, t]`, and the horizon is `H = sum(p_j)`.

use serde::{Deserialize, Serialize};

use crate::error::{GspError, Result};

/// A point on the slotted time axis.
pub type Time = usize;

/// Cost of completing a job at a given time.
#[derive(Debug, Clone, PartialEq)]
pub enum CostFn {
    /// `w * t`
    WeightedCompletion { w: f64 },
    /// `w * t^k`
    WeightedKNorm { w: f64, k: f64 },
    /// `0` up to the deadline, `w` afterwards.
    Throughput { w: f64, d: f64 },
    /// `w * max(0, t - d)`
    Tardiness { w: f64, d: f64 },
    /// `w * (e^t - 1)`, shifted so that completing at time zero is free.
    Exponential { w: f64 },
    /// Right-continuous step function: the cost at `t` is the cost of the
    /// last table entry with time `<= t`, or zero before the first entry.
    StepTable { table: Vec<(f64, f64)> },
}

impl CostFn {
    pub fn eval(&self, t: Time) -> f64 {
        let tf = t as f64;
        match *self {
            CostFn::WeightedCompletion { w } => w * tf,
            CostFn::WeightedKNorm { w, k } => w * tf.powf(k),
            CostFn::Throughput { w, d } => {
                if tf <= d {
                    0.0
                } else {
                    w
                }
            }
            CostFn::Tardiness { w, d } => w * (tf - d).max(0.0),
            CostFn::Exponential { w } => w * tf.exp_m1(),
            CostFn::StepTable { ref table } => {
                // entries are sorted by time; find the last one at or before t
                let idx = table.partition_point(|&(time, _)| time <= tf);
                if idx == 0 {
                    0.0
                } else {
                    table[idx - 1].1
                }
            }
        }
    }

    /// Weight used by ratio-based heuristics. Step tables have none and count as 1.
    pub fn weight(&self) -> f64 {
        match *self {
            CostFn::WeightedCompletion { w }
            | CostFn::WeightedKNorm { w, .. }
            | CostFn::Throughput { w, .. }
            | CostFn::Tardiness { w, .. }
            | CostFn::Exponential { w } => w,
            CostFn::StepTable { .. } => 1.0,
        }
    }

    pub fn deadline(&self) -> Option<f64> {
        match *self {
            CostFn::Throughput { d, .. } | CostFn::Tardiness { d, .. } => Some(d),
            _ => None,
        }
    }

    pub fn kind(&self) -> CostKind {
        match self {
            CostFn::WeightedCompletion { .. } => CostKind::WeightedCompletion,
            CostFn::WeightedKNorm { .. } => CostKind::WeightedKNorm,
            CostFn::Throughput { .. } => CostKind::Throughput,
            CostFn::Tardiness { .. } => CostKind::Tardiness,
            CostFn::Exponential { .. } => CostKind::Exponential,
            CostFn::StepTable { .. } => CostKind::StepTable,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GspError::InvalidInstance(msg));
        let check_w = |w: f64| {
            if w.is_finite() && w >= 0.0 {
                Ok(())
            } else {
                bad(format!("weight must be finite and non-negative, got {w}"))
            }
        };
        let check_d = |d: f64| {
            if d.is_finite() && d >= 0.0 {
                Ok(())
            } else {
                bad(format!("deadline must be finite and non-negative, got {d}"))
            }
        };
        match *self {
            CostFn::WeightedCompletion { w } | CostFn::Exponential { w } => check_w(w),
            CostFn::WeightedKNorm { w, k } => {
                check_w(w)?;
                if !(k.is_finite() && k >= 1.0) {
                    return bad(format!("norm exponent must be >= 1, got {k}"));
                }
                Ok(())
            }
            CostFn::Throughput { w, d } | CostFn::Tardiness { w, d } => {
                check_w(w)?;
                check_d(d)
            }
            CostFn::StepTable { ref table } => {
                let mut prev: Option<(f64, f64)> = None;
                for &(time, cost) in table {
                    if !(time.is_finite() && time >= 0.0 && cost.is_finite() && cost >= 0.0) {
                        return bad(format!("step table entry ({time}, {cost}) out of range"));
                    }
                    if time == 0.0 && cost != 0.0 {
                        return bad("step table must have zero cost at time 0".into());
                    }
                    if let Some((pt, pc)) = prev {
                        if time <= pt {
                            return bad("step table times must be strictly increasing".into());
                        }
                        if cost < pc {
                            return bad("step table costs must be non-decreasing".into());
                        }
                    }
                    prev = Some((time, cost));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostKind {
    WeightedCompletion,
    WeightedKNorm,
    Throughput,
    Tardiness,
    Exponential,
    StepTable,
}

impl CostKind {
    pub const ALL: [CostKind; 6] = [
        CostKind::WeightedCompletion,
        CostKind::WeightedKNorm,
        CostKind::Throughput,
        CostKind::Tardiness,
        CostKind::Exponential,
        CostKind::StepTable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CostKind::WeightedCompletion => "weighted-completion",
            CostKind::WeightedKNorm => "weighted-knorm",
            CostKind::Throughput => "throughput",
            CostKind::Tardiness => "tardiness",
            CostKind::Exponential => "exponential",
            CostKind::StepTable => "step-table",
        }
    }
}

impl std::str::FromStr for CostKind {
    type Err = GspError;

    fn from_str(s: &str) -> Result<Self> {
        CostKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| GspError::InvalidInstance(format!("unknown cost kind {s:?}")))
    }
}

impl std::fmt::Display for CostKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub id: usize,
    pub p: usize,
    pub cost: CostFn,
}

impl Job {
    /// `g(t) - g(t-1)` for `t >= 1`.
    pub fn marginal_cost(&self, t: Time) -> f64 {
        debug_assert!(t >= 1);
        (self.cost.eval(t) - self.cost.eval(t - 1)).max(0.0)
    }
}

/// `g(t)` for a given cost function.
pub fn eval_cost(cost: &CostFn, t: Time) -> f64 {
    cost.eval(t)
}

/// `g_j(t) - g_j(t-1)`, the objective coefficient of `x[j][t]`.
pub fn marginal_cost(job: &Job, t: Time) -> f64 {
    job.marginal_cost(t)
}

/// A validated scheduling instance. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    machines: usize,
    jobs: Vec<Job>,
    horizon: Time,
}

impl Instance {
    /// Builds an instance from `(p_j, g_j)` pairs; job ids follow input order.
    pub fn new(machines: usize, jobs: Vec<(usize, CostFn)>) -> Result<Self> {
        if machines < 1 {
            return Err(GspError::InvalidInstance("machine count must be >= 1".into()));
        }
        if jobs.is_empty() {
            return Err(GspError::InvalidInstance("instance has no jobs".into()));
        }
        let jobs: Vec<Job> = jobs
            .into_iter()
            .enumerate()
            .map(|(id, (p, cost))| Job { id, p, cost })
            .collect();
        for job in &jobs {
            if job.p < 1 {
                return Err(GspError::InvalidInstance(format!(
                    "job {} has processing time {} < 1",
                    job.id, job.p
                )));
            }
            job.cost.validate()?;
        }
        let horizon = jobs.iter().map(|j| j.p).sum();
        for job in &jobs {
            if !job.cost.eval(horizon).is_finite() {
                return Err(GspError::InvalidInstance(format!(
                    "cost of job {} overflows before the horizon {horizon}",
                    job.id
                )));
            }
        }
        Ok(Instance {
            machines,
            jobs,
            horizon,
        })
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, j: usize) -> &Job {
        &self.jobs[j]
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    /// Largest processing time.
    pub fn p_max(&self) -> usize {
        self.jobs.iter().map(|j| j.p).max().unwrap_or(0)
    }

    pub fn total_work(&self) -> usize {
        self.horizon
    }

    /// Last time slot; equals the total processing time.
    pub fn horizon(&self) -> Time {
        self.horizon
    }

    pub fn processing_times(&self) -> Vec<usize> {
        self.jobs.iter().map(|j| j.p).collect()
    }

    /// `sum_j g_j(C_j)`.
    pub fn cost_of(&self, completions: &[Time]) -> f64 {
        self.jobs
            .iter()
            .zip(completions)
            .map(|(job, &c)| job.cost.eval(c))
            .sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: InstanceJson =
            serde_json::from_str(text).map_err(|e| GspError::Parse(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceJson::from(self)).expect("instance serializes")
    }

    /// Hex SHA-256 of the canonical compact JSON encoding.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical =
            serde_json::to_string(&InstanceJson::from(self)).expect("instance serializes");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

pub(crate) const FORMAT_VERSION: u32 = 1;

fn default_format() -> u32 {
    FORMAT_VERSION
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    #[serde(default = "default_format")]
    format: u32,
    machines: i64,
    jobs: Vec<JobJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobJson {
    p: i64,
    cost: CostJson,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<(f64, f64)>>,
}

impl TryFrom<CostJson> for CostFn {
    type Error = GspError;

    fn try_from(raw: CostJson) -> Result<Self> {
        let kind: CostKind = raw.kind.parse()?;
        let w = raw.w.unwrap_or(1.0);
        let need_d = || {
            raw.d.ok_or_else(|| {
                GspError::InvalidInstance(format!("cost kind {kind} requires a deadline \"d\""))
            })
        };
        Ok(match kind {
            CostKind::WeightedCompletion => CostFn::WeightedCompletion { w },
            CostKind::WeightedKNorm => CostFn::WeightedKNorm {
                w,
                k: raw.k.unwrap_or(2.0),
            },
            CostKind::Throughput => CostFn::Throughput { w, d: need_d()? },
            CostKind::Tardiness => CostFn::Tardiness { w, d: need_d()? },
            CostKind::Exponential => CostFn::Exponential { w },
            CostKind::StepTable => CostFn::StepTable {
                table: raw.table.ok_or_else(|| {
                    GspError::InvalidInstance("step-table cost requires \"table\"".into())
                })?,
            },
        })
    }
}

impl From<&CostFn> for CostJson {
    fn from(cost: &CostFn) -> Self {
        let mut raw = CostJson {
            kind: cost.kind().as_str().to_string(),
            w: None,
            k: None,
            d: None,
            table: None,
        };
        match *cost {
            CostFn::WeightedCompletion { w } | CostFn::Exponential { w } => raw.w = Some(w),
            CostFn::WeightedKNorm { w, k } => {
                raw.w = Some(w);
                raw.k = Some(k);
            }
            CostFn::Throughput { w, d } | CostFn::Tardiness { w, d } => {
                raw.w = Some(w);
                raw.d = Some(d);
            }
            CostFn::StepTable { ref table } => raw.table = Some(table.clone()),
        }
        raw
    }
}

impl TryFrom<InstanceJson> for Instance {
    type Error = GspError;

    fn try_from(raw: InstanceJson) -> Result<Self> {
        if raw.format != FORMAT_VERSION {
            return Err(GspError::InvalidInstance(format!(
                "unsupported format version {}",
                raw.format
            )));
        }
        if raw.machines < 1 {
            return Err(GspError::InvalidInstance("machine count must be >= 1".into()));
        }
        let mut jobs = Vec::with_capacity(raw.jobs.len());
        for (id, job) in raw.jobs.into_iter().enumerate() {
            if job.p < 1 {
                return Err(GspError::InvalidInstance(format!(
                    "job {id} has processing time {} < 1",
                    job.p
                )));
            }
            jobs.push((job.p as usize, CostFn::try_from(job.cost)?));
        }
        Instance::new(raw.machines as usize, jobs)
    }
}

impl From<&Instance> for InstanceJson {
    fn from(inst: &Instance) -> Self {
        InstanceJson {
            format: FORMAT_VERSION,
            machines: inst.machines as i64,
            jobs: inst
                .jobs
                .iter()
                .map(|j| JobJson {
                    p: j.p as i64,
                    cost: CostJson::from(&j.cost),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(p: usize, cost: CostFn) -> Job {
        Job { id: 0, p, cost }
    }

    #[test]
    fn eval_matches_closed_forms() {
        assert_eq!(eval_cost(&CostFn::WeightedCompletion { w: 2.0 }, 5), 10.0);
        let thr = CostFn::Throughput { w: 5.0, d: 3.0 };
        assert_eq!(eval_cost(&thr, 3), 0.0);
        assert_eq!(eval_cost(&thr, 4), 5.0);
        assert_eq!(eval_cost(&CostFn::Tardiness { w: 2.0, d: 3.0 }, 5), 4.0);
        assert_eq!(eval_cost(&CostFn::WeightedKNorm { w: 1.0, k: 2.0 }, 3), 9.0);
        assert_eq!(eval_cost(&CostFn::Exponential { w: 1.0 }, 0), 0.0);
    }

    #[test]
    fn marginal_examples() {
        assert_eq!(marginal_cost(&job(1, CostFn::WeightedCompletion { w: 3.0 }), 7), 3.0);
        let thr = job(1, CostFn::Throughput { w: 5.0, d: 3.0 });
        assert_eq!(marginal_cost(&thr, 4), 5.0);
        assert_eq!(marginal_cost(&thr, 5), 0.0);
        assert_eq!(marginal_cost(&job(1, CostFn::Tardiness { w: 1.0, d: 3.0 }), 3), 0.0);
    }

    #[test]
    fn step_table_is_right_continuous() {
        let f = CostFn::StepTable {
            table: vec![(0.0, 0.0), (2.0, 1.5), (5.0, 4.0)],
        };
        assert_eq!(f.eval(1), 0.0);
        assert_eq!(f.eval(2), 1.5);
        assert_eq!(f.eval(4), 1.5);
        assert_eq!(f.eval(5), 4.0);
        assert_eq!(f.eval(100), 4.0);
    }

    #[test]
    fn parse_rejects_bad_input() {
        let cases = [
            r#"{"machines":0,"jobs":[{"p":1,"cost":{"kind":"weighted-completion"}}]}"#,
            r#"{"machines":1,"jobs":[{"p":0,"cost":{"kind":"weighted-completion"}}]}"#,
            r#"{"machines":1,"jobs":[{"p":1,"cost":{"kind":"step-table","table":[[1,2],[2,1]]}}]}"#,
            r#"{"machines":1,"jobs":[{"p":1,"cost":{"kind":"step-table","table":[[2,1],[1,3]]}}]}"#,
            r#"{"machines":1,"jobs":[{"p":1,"cost":{"kind":"throughput","w":1}}]}"#,
            r#"{"machines":1,"jobs":[{"p":1,"cost":{"kind":"bogus"}}]}"#,
            r#"{"machines":1,"jobs":[{"p":1,"cost":{"kind":"weighted-completion","w":-1}}]}"#,
            r#"{"machines":1,"jobs":"nope"}"#,
        ];
        for case in cases {
            assert!(Instance::from_json(case).is_err(), "accepted {case}");
        }
    }

    #[test]
    fn parse_and_derived_fields() {
        let inst = Instance::from_json(
            r#"{"format":1,"machines":2,"jobs":[
                {"p":3,"cost":{"kind":"tardiness","w":2,"d":4}},
                {"p":1,"cost":{"kind":"step-table","table":[[0,0],[3,7]]}}]}"#,
        )
        .unwrap();
        assert_eq!(inst.machines(), 2);
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.p_max(), 3);
        assert_eq!(inst.horizon(), 4);
        let back = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.digest(), inst.digest());
    }

    #[test]
    fn exponential_overflow_rejected() {
        let jobs = vec![(400, CostFn::Exponential { w: 1.0 }), (400, CostFn::Exponential { w: 1.0 })];
        assert!(Instance::new(1, jobs).is_err());
    }
}
