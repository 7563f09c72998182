//! Preemptive scheduling with general cost functions on identical machines.
//!
//! The solver computes a lower bound from an LP strengthened with job-cover
//! rows (separated by dynamic programming), rounds it by phased randomized
//! rounding, and turns the resulting completion times into an explicit
//! preemptive, migratory schedule via max-flow. Small instances can be
//! cross-checked against the exhaustive engines in [`oracle`].

pub mod error;
pub mod flow;
pub mod generate;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod pipeline;
pub mod rounding;
pub mod timeline;

pub use error::{GspError, Result};
pub use flow::{
    build_flow_graph, extract_schedule, is_valid, max_flow, validate_schedule, CompletionVector,
    Schedule, ValidationReport, Violation,
};
pub use instance::{CostFn, CostKind, Instance, Job, Time};
pub use lp::{separate, solve_lp, CutConstraint, FracSolution, LpOptions, LpResult};
pub use pipeline::{solve, RunReport};
pub use rounding::{run, run_from, run_with_draws, PhaseRecord, RoundingConfig, RoundingOutcome};
pub use timeline::{build_timeline, GridMode, Timeline};
