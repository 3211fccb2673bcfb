use thiserror::Error;

use crate::ring::RingError;

#[derive(Debug, Error)]
pub enum CordError {
    #[error("invalid knot spec: {0}")]
    Spec(String),
    #[error("degenerate spec: {0}")]
    DegenerateSpec(String),
    #[error("curve is not embedded: segments {0} and {1} are {2:.3e} apart")]
    NonEmbedded(usize, usize, f64),
    #[error("blackboard framing undefined: tangent is vertical at s = {0}")]
    VerticalTangent(f64),
    #[error("linking number is numerically ambiguous: {0}")]
    NumericalAmbiguity(f64),
    #[error("degenerate critical point at ({0:.6}, {1:.6})")]
    DegenerateCritical(f64, f64),
    #[error("critical point census does not close: {0}")]
    SeedingInsufficient(String),
    #[error("genericity violation: {0}")]
    GenericityViolation(String),
    #[error("flow step collapsed at ({0:.6}, {1:.6})")]
    StepCollapse(f64, f64),
    #[error("more than {0} splits in one trace")]
    MaxSplits(usize),
    #[error("split produced a child shorter than the endpoint margin")]
    ShortChild,
    #[error("no generic configuration found after {0} perturbations: {1}")]
    GenericityExhausted(usize, String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CordError {
    /// Whether a perturb-and-retry loop may recover from this error.
    pub fn is_genericity(&self) -> bool {
        matches!(
            self,
            CordError::DegenerateCritical(..)
                | CordError::GenericityViolation(_)
                | CordError::StepCollapse(..)
                | CordError::ShortChild
                | CordError::MaxSplits(_)
                | CordError::SeedingInsufficient(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, CordError>;
