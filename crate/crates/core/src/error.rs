use thiserror::Error;

#[derive(Debug, Error)]
pub enum GspError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid completion vector: {0}")]
    InvalidCompletions(String),

    #[error("inconsistent flow: {0}")]
    InconsistentFlow(String),

    #[error("instance exceeds oracle guard: {0}")]
    GuardExceeded(String),

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("simplex iteration limit reached after {0} pivots")]
    LpIterationLimit(usize),

    #[error("cutting-plane loop did not converge within {0} cuts")]
    NonConvergence(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = GspError> = std::result::Result<T, E>;
