use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("jets have different base points")]
    BasePointMismatch,

    #[error("outer jet is not expanded at the inner jet's value")]
    ExpansionPointMismatch,

    #[error("division by a jet whose constant term vanishes")]
    DivisionByZeroConstant,

    #[error("jet order {have} too small, need at least {need}")]
    OrderTooSmall { have: usize, need: usize },

    #[error("derivative vanishes at the base point")]
    CriticalPoint,

    #[error("orbit passes through a critical point at step {step}")]
    CriticalOrbit { step: usize },

    /// Padé solve failed: the Hankel system of order `order` is singular.
    /// `degenerate` distinguishes the sub-cases when exact arithmetic can:
    /// `Some(true)` means the singular system was still consistent (the
    /// approximant exists but collapses to a lower order), `Some(false)`
    /// means inconsistent (no approximant), `None` means undetermined.
    #[error("not normal of order {order}")]
    NotNormal {
        order: usize,
        degenerate: Option<bool>,
    },

    #[error("pole at the evaluation point")]
    PoleAtPoint,

    #[error("constant-term coefficient q[0] must be nonzero")]
    DenominatorVanishesAtBase,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("P_d membership check failed: {0}")]
    MembershipFailure(String),

    #[error("random sampling failed after {0} rejections")]
    SamplingFailure(usize),

    #[error("interval map validation failed: {0}")]
    InvalidMap(String),

    #[error("operation requires the float backend: {0}")]
    FloatRequired(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("post-hoc coincidence check failed (ill-conditioned solve)")]
    PostCheckFailed,
}

pub type Result<T> = std::result::Result<T, Error>;
