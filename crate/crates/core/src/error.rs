use thiserror::Error;

/// Errors produced by the Gaussian and Fock backends and the experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("covariance matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NonPositiveCovariance { min_eigenvalue: f64 },

    #[error("eigenvalues of J*gamma do not pair as +/- i nu (deviation {deviation:e})")]
    PairingFailure { deviation: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("truncation budget exceeded: tail mass {tail:e} > budget {budget:e}")]
    TruncationBudgetExceeded { tail: f64, budget: f64 },

    #[error("support mismatch: weight {weight:e} of the first state lies outside the support of the second")]
    SupportMismatch { weight: f64 },

    #[error("state is rank deficient for the Fisher information (leakage {leakage:e} into clamped eigenspace)")]
    RankDeficient { leakage: f64 },

    #[error("integrator step collapsed to {step:e} at t = {t}")]
    StiffnessFailure { t: f64, step: f64 },

    #[error("trace drifted by {drift:e} during evolution")]
    TraceDrift { drift: f64 },

    #[error("finite-difference step {step:e} is outside the admissible range or leaves the truncation budget")]
    StepTooLarge { step: f64 },

    #[error("diffusion clock {clock} exceeds the truncation-safe horizon {horizon}")]
    ClockOverflow { clock: f64, horizon: f64 },

    #[error("uncertainty relation violated: min eigenvalue of gamma + iJ is {min_eigenvalue:e}")]
    UncertaintyViolation { min_eigenvalue: f64 },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(line: usize, msg: impl Into<String>) -> Self {
        Error::Config {
            line,
            message: msg.into(),
        }
    }
}
