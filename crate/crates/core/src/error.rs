use thiserror::Error;

/// Errors raised by the detector model and its numerical oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field} = {value} is outside the allowed range {allowed}")]
    OutOfDomain {
        field: &'static str,
        value: f64,
        allowed: &'static str,
    },

    #[error("{quantity} overflows f64 (log magnitude {log_value:.3})")]
    Overflow {
        quantity: &'static str,
        log_value: f64,
    },

    #[error("degenerate spectrum: {0}")]
    Degenerate(String),

    #[error("finite-difference step {step} must satisfy 0 < h < {limit}")]
    StepTooLarge { step: f64, limit: f64 },

    #[error(
        "QFI landscape has no interior maximum in [{lo}, {hi}] (coarse maximum at beta = {at})"
    )]
    FlatLandscape { lo: f64, hi: f64, at: f64 },

    #[error("invalid search bracket [{lo}, {hi}] or tolerance {tol}")]
    InvalidBracket { lo: f64, hi: f64, tol: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error(
        "Bell-diagonal coefficients do not define a state (minimum eigenvalue {min_eigenvalue:e})"
    )]
    NotAState { min_eigenvalue: f64 },

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("integration step {dt:e} exceeds the stability bound {limit:e} or end time {t_end:e} is too short")]
    InvalidStep { dt: f64, limit: f64, t_end: f64 },

    #[error("integration unstable at t = {time:e}: trace deviates from 1 by {trace_defect:e}")]
    StepUnstable { time: f64, trace_defect: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
