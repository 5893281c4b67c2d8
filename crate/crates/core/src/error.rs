use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LorenzError {
    /// A parameter or point lies outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller broke an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterate left the domain by more than the tolerance, which means the
    /// map itself is broken.
    #[error("iterate {step} escaped the domain with value {value}")]
    Escape { step: usize, value: f64 },

    /// A quantity is not defined at the requested point.
    #[error("undefined: {0}")]
    Undefined(String),

    /// An internal consistency check failed (bracketing, detector soundness).
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// A hypothesis of a combinatorial comparison does not hold.
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    /// A caller-supplied predicate is not monotone along the searched fiber.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed symbolic input such as a word with a foreign symbol.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, LorenzError>;
