use thiserror::Error;

use crate::surface::EdgeId;

/// Errors raised by the surface, coordinate, holonomy and search layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input violates a structural precondition (bad genus/puncture count,
    /// malformed triangulation, out-of-range identifier, ...).
    #[error("constraint violation: {0}")]
    Constraint(String),

    /// The edge has the same face on both sides, so it is not the diagonal
    /// of a quadrilateral.
    #[error("flip undefined on edge {0}: both sides lie in one face")]
    FlipUndefined(EdgeId),

    #[error("degenerate flip on edge {edge}: right-hand side vanishes")]
    DegenerateFlip { edge: EdgeId },

    /// A flip sequence stopped at `step` (0-based) on a degenerate flip.
    #[error("flip sequence failed at step {step} (edge {edge}): degenerate")]
    DegenerateAt { step: usize, edge: EdgeId },

    #[error("coordinates are not a valid chart point (some puncture sum vanishes)")]
    InvalidChart,

    #[error("malformed walk: {0}")]
    MalformedWalk(String),

    #[error("holonomy is not parabolic")]
    NotParabolic,

    /// Rejection sampling never hit a valid point; the sign pattern appears
    /// to make some puncture sum vanish identically.
    #[error("sign pattern is identically invalid after {retries} retries")]
    IdenticallyInvalid { retries: usize },

    #[error("no route found within depth {depth}")]
    Inconclusive { depth: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
