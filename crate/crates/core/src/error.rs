//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("coordinate {index} is already fixed")]
    AlreadyFixed { index: usize },

    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operation requires a symmetric body: {0}")]
    AsymmetricBody(&'static str),

    #[error("body has no norm-defining constraints")]
    EmptyBody,

    #[error("gauge norm is infinite: zero-bound constraint with nonzero projection")]
    InfiniteNorm,

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("simplex iteration limit reached (likely numerical trouble)")]
    LpIterationLimit,

    #[error("exhaustive enumeration supports dimension <= {max}, got {got}")]
    EnumerationDimension { max: usize, got: usize },

    #[error("vertex enumeration requires a bounded body")]
    UnboundedBody,

    #[error("quantile undefined at p = {0}; p must lie strictly inside (0, 1)")]
    InvalidProbability(f64),

    #[error("too few samples: got {got}, need at least {min}")]
    TooFewSamples { got: usize, min: usize },

    #[error("measure estimate indistinguishable from zero ({hits} hits in {samples} samples)")]
    MeasureVanished { hits: usize, samples: usize },

    #[error("measured Gaussian mass {measured} below required threshold {required}")]
    MeasureBelowThreshold { measured: f64, required: f64 },

    #[error(
        "no retry reached the tight-coordinate threshold after {attempts} attempts \
         (best fraction {best_fraction})"
    )]
    RetriesExhausted { attempts: usize, best_fraction: f64 },

    #[error("coloring recursion failed at level {level}: {cause}")]
    ColoringLevel { level: usize, cause: Box<Error> },

    #[error("chain start point violates the body constraints")]
    InfeasibleStart,

    #[error("chord degenerate along every sampled direction; body over-restricted")]
    DegenerateChord,

    #[error("no coordinate passed the centered-marginal test")]
    NoGoodCoordinate,

    #[error(
        "walk stalled at step {step} of {target}: no good coordinate after budget doubling \
         ({fixed:?} fixed so far)"
    )]
    WalkStalled {
        step: usize,
        target: usize,
        fixed: Vec<(usize, f64)>,
    },

    #[error("alpha = {alpha} admits no feasible constants window")]
    AlphaOutOfRange { alpha: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
