use thiserror::Error;

/// Errors raised by the engines and the workspace loader.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PflError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty support: {0}")]
    EmptySupport(String),

    #[error("value {0} is not in the space")]
    ValueNotInSpace(f64),

    #[error("conditioning event has probability zero: {0}")]
    ConditionImpossible(String),

    #[error("inconsistent joint distribution: {0}")]
    InconsistentJoint(String),

    #[error("unresolved joint: {0} is neither assumed independent nor supplied")]
    UnresolvedJoint(String),

    #[error("zero-probability event: {0}")]
    ZeroProbabilityEvent(String),

    #[error("quadrature failed to converge on [{lo}, {hi}] (estimated error {error:e})")]
    QuadratureFailure { lo: f64, hi: f64, error: f64 },

    #[error("invalid base element {base}: selection probability {prob} is not zero")]
    InvalidBase { base: f64, prob: f64 },

    #[error("stage '{stage}' demands {demanded} units but only {available} remain untreated")]
    ProportionOverflow {
        stage: String,
        demanded: usize,
        available: usize,
    },

    #[error("empty group: {0}")]
    EmptyGroup(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl PflError {
    /// Validation and parse failures are configuration problems; everything
    /// else comes out of an engine.
    pub fn is_validation(&self) -> bool {
        matches!(self, PflError::Validation(_) | PflError::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, PflError>;
