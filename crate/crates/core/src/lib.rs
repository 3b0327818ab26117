//! Signed Penner coordinates for flat PSL(2,ℝ)-connections on punctured
//! surfaces with parabolic holonomy around the punctures.
//!
//! * [`surface`]: ideal triangulations as oriented combinatorial maps,
//!   flips, and polygon-triangulation enumeration.
//! * [`coords`]: edge lengths and face signs, the puncture functional φ,
//!   the flip law, the puncture scaling action and the component index.
//! * [`holonomy`]: PSL(2,ℝ) matrices, the Borel group, graph connections on
//!   the ribbon graph of a triangulation, parabolicity and admissibility.
//! * [`search`]: sampling chart points, flip routing and sign-pattern census.

pub mod coords;
pub mod error;
pub mod holonomy;
pub mod scalar;
pub mod search;
pub mod surface;

pub use error::{Error, Result};
pub use scalar::{Mode, Rational, Scalar, Sign, Tolerance};
