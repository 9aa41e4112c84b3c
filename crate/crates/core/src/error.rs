use thiserror::Error;

use crate::catalog::SolutionId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pot must be ≥ 2 (got {0})")]
    InvalidPot(f64),

    #[error("frequency {name} = {value} is outside [0, 1]")]
    FrequencyOutOfRange { name: &'static str, value: f64 },

    #[error("pot {pot} is outside the validity range of solution {id}")]
    PotOutOfRange { id: SolutionId, pot: f64 },

    #[error("free parameter {name} = {value} violates [{lo}, {hi}] for solution {id}")]
    FreeParamViolation {
        id: SolutionId,
        name: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("unknown free parameter {name} for solution {id}")]
    UnknownFreeParam { id: SolutionId, name: String },

    #[error("initial frequency {name} = {value} must lie strictly inside (0, 1)")]
    InvalidInitial { name: &'static str, value: f64 },

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("exceeded {steps} integration steps at t = {t}")]
    TooManySteps { steps: usize, t: f64 },

    #[error("eigenvalue iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("window [{t0}, {t1}] is outside the trajectory span [{start}, {end}]")]
    WindowOutOfRange {
        t0: f64,
        t1: f64,
        start: f64,
        end: f64,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
