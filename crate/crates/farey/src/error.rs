//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by lattice computations, continued fraction handling and
/// the geometric constructions built on top of them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FareyError {
    /// The content of the zero vector is not defined.
    #[error("undefined content: zero vector")]
    UndefinedContent,
    /// A segment with coinciding endpoints has no integer length.
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    /// The supplied vectors do not have full rank.
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    /// Vectors of different lengths were combined.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        /// Required length.
        expected: usize,
        /// Length actually supplied.
        found: usize,
    },
    /// A lattice point enumeration would exceed the configured budget.
    #[error("budget exceeded: {needed} points requested, budget {budget}")]
    BudgetExceeded {
        /// Number of points that would have to be visited.
        needed: String,
        /// Configured maximum.
        budget: u64,
    },
    /// A coordinate was negative where only non-negative values make sense.
    #[error("negative coordinate at index {0}")]
    NegativeCoordinate(usize),
    /// All coordinates vanish.
    #[error("all coordinates are zero")]
    ZeroVector,
    /// The dimension is not supported by the requested operation.
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    /// Continued fraction text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// A continued fraction is structurally inconsistent.
    #[error("malformed cf: {0}")]
    MalformedCf(String),
    /// The continued fraction cannot be rewritten in extended form.
    #[error("not extendable: {0}")]
    NotExtendable(String),
    /// An index was outside the valid range.
    #[error("index {index} out of range 0..={max}")]
    OutOfRange {
        /// Requested index.
        index: usize,
        /// Largest admissible index.
        max: usize,
    },
    /// A continued fraction violates the admissibility rules.
    #[error("inadmissible cf: {0}")]
    Inadmissible(String),
    /// An operation requires strictly positive elements.
    #[error("zero elements are not supported: {0}")]
    ZeroElement(String),
    /// A precondition of a theorem or construction failed.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A word does not match any catalogued decomposition pattern.
    #[error("uncatalogued pattern: {0}")]
    UncataloguedPattern(String),
    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, FareyError>;
