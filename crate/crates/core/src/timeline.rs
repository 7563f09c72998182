//! Time grids used by the flow network and the schedule builder.
//!
//! A timeline is a sorted list of breakpoints `t_1 < ... < t_K = H`. Interval
//! `i` covers the slots `t_{i-1}+1 ..= t_i` (with `t_0 = 0`) and has length
//! `l_i = t_i - t_{i-1}`. The unit grid has one interval per slot; the
//! compressed grid keeps only the times where some job's cost first reaches a
//! new power of two.

use serde::{Deserialize, Serialize};

use crate::error::{GspError, Result};
use crate::instance::{Instance, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridMode {
    #[default]
    Unit,
    Compressed,
}

impl std::str::FromStr for GridMode {
    type Err = GspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(GridMode::Unit),
            "compressed" => Ok(GridMode::Compressed),
            other => Err(GspError::InvalidParameter(format!("unknown grid {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timeline {
    breakpoints: Vec<Time>,
}

impl Timeline {
    /// Builds a timeline from strictly increasing positive breakpoints.
    pub fn from_breakpoints(breakpoints: Vec<Time>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints[0] == 0 {
            return Err(GspError::InvalidParameter(
                "timeline needs positive breakpoints".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GspError::InvalidParameter(
                "timeline breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Timeline { breakpoints })
    }

    pub fn unit(horizon: Time) -> Self {
        Timeline {
            breakpoints: (1..=horizon).collect(),
        }
    }

    pub fn breakpoints(&self) -> &[Time] {
        &self.breakpoints
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    pub fn horizon(&self) -> Time {
        *self.breakpoints.last().expect("timeline is non-empty")
    }

    /// End time `t_i` of interval `i`.
    pub fn end(&self, i: usize) -> Time {
        self.breakpoints[i]
    }

    /// Start time `t_{i-1}` of interval `i`.
    pub fn start(&self, i: usize) -> Time {
        if i == 0 {
            0
        } else {
            self.breakpoints[i - 1]
        }
    }

    pub fn length(&self, i: usize) -> usize {
        self.end(i) - self.start(i)
    }

    pub fn lengths(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.length(i)).collect()
    }

    /// Smallest breakpoint `>= t`, clamped to the horizon.
    pub fn round_up(&self, t: Time) -> Time {
        let idx = self.breakpoints.partition_point(|&b| b < t);
        self.breakpoints
            .get(idx)
            .copied()
            .unwrap_or_else(|| self.horizon())
    }
}

/// Breakpoints for the chosen grid. The compressed grid is the union over
/// jobs of the first times where `g_j` reaches each power of two (including
/// fractional powers for sub-unit costs), plus the horizon.
pub fn build_timeline(instance: &Instance, mode: GridMode) -> Timeline {
    let horizon = instance.horizon();
    match mode {
        GridMode::Unit => Timeline::unit(horizon),
        GridMode::Compressed => {
            let mut times: Vec<Time> = Vec::new();
            for job in instance.jobs() {
                let mut prev = job.cost.eval(0);
                for t in 1..=horizon {
                    let cur = job.cost.eval(t);
                    if cur > 0.0 && (prev <= 0.0 || cur.log2().floor() > prev.log2().floor()) {
                        times.push(t);
                    }
                    prev = cur;
                }
            }
            times.push(horizon);
            times.sort_unstable();
            times.dedup();
            Timeline { breakpoints: times }
        }
    }
}
