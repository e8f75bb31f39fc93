use thiserror::Error;

/// Errors raised by the algebra engine.
///
/// Mathematical precondition failures (annihilation, high-syzygy pattern,
/// generation degrees) are distinguished from internal invariant breaches,
/// which always indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("non-homogeneous input: {0}")]
    HomogeneityError(String),
    #[error("not a chain map: {0}")]
    ChainMapError(String),
    #[error("complex is not minimal: {0}")]
    MinimalityError(String),
    #[error("element does not annihilate the module: {0}")]
    AnnihilationError(String),
    #[error("lifting failed: {0}")]
    LiftError(String),
    #[error("module does not follow the high-syzygy Betti pattern: {0}")]
    NotHighSyzygy(String),
    #[error("generation hypothesis failed: {0}")]
    GenerationError(String),
    #[error("regularity hypothesis failed: {0}")]
    RegularityHypothesisFailed(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl AlgebraError {
    /// True for errors that report a violated mathematical hypothesis on
    /// the input, as opposed to malformed input or a bug.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            AlgebraError::AnnihilationError(_)
                | AlgebraError::NotHighSyzygy(_)
                | AlgebraError::GenerationError(_)
                | AlgebraError::RegularityHypothesisFailed(_)
                | AlgebraError::HomogeneityError(_)
                | AlgebraError::MinimalityError(_)
                | AlgebraError::ChainMapError(_)
                | AlgebraError::LiftError(_)
                | AlgebraError::InvalidParameter(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
