use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("robin parameter {alpha} outside [{lo}, {hi}]")]
    AlphaOutOfRange { alpha: f64, lo: f64, hi: f64 },

    #[error("integration failed at r = {radius}: {reason}")]
    IntegrationFailure { radius: f64, reason: &'static str },

    #[error("no convergence after {iterations} iterations, best bracket [{lo}, {hi}]")]
    NotConverged { iterations: usize, lo: f64, hi: f64 },

    /// mu_1 >= tau_2 for a ball: a solver inconsistency, not a mathematical outcome.
    #[error("proposition violated: {0}")]
    PropositionViolation(String),

    #[error("profile mismatch: {0}")]
    ProfileMismatch(String),

    #[error("theorem inequality violated: {0}")]
    TheoremViolation(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSpace(_)
            | Error::Domain { .. }
            | Error::InvalidInput(_)
            | Error::AlphaOutOfRange { .. } => "validation",
            Error::IntegrationFailure { .. } | Error::NotConverged { .. } => "convergence",
            Error::PropositionViolation(_)
            | Error::ProfileMismatch(_)
            | Error::TheoremViolation(_) => "assertion",
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "validation" => 2,
            "convergence" => 3,
            _ => 4,
        }
    }
}

pub(crate) fn require_positive(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}
