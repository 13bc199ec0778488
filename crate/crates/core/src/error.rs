use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Newton iteration did not converge after {iterations} iterations (max residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("Jacobian is numerically singular (condition estimate {condition:e})")]
    SingularJacobian { condition: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("weight family is infeasible already at epsilon = {epsilon}")]
    AllInfeasible { epsilon: f64 },

    #[error("test-function support leaves the space-time cone: {0}")]
    SupportViolation(String),

    #[error("weight concentrates on {active} of {total} quadrature nodes; grid cannot resolve it")]
    DegenerateWeight { active: usize, total: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
