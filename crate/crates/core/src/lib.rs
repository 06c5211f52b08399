//! Polyhedral normed spaces and their horofunction compactification.
//!
//! For a polytope `B` with the origin in its interior, this crate computes the
//! dual ball `B°` (polar taken with `⟨y|x⟩ ≥ −1`), the face lattices of both,
//! the horofunctions `h_{E,p}` indexed by faces `E` of `B°`, a finite-horizon
//! classifier deciding which horofunction a sequence converges to, and the
//! moment map identifying the compactification with `B°`.

pub mod classify;
pub mod error;
pub mod gauge;
pub mod horo;
mod hull;
pub mod io;
pub mod linalg;
pub mod moment;
pub mod polytope;
pub mod sequence;
pub mod space;

pub use classify::{default_grid, ClassificationVerdict, ConditionReport, Tolerances, Verdict};
pub use error::{Error, Result};
pub use gauge::pseudo_norm;
pub use horo::{lf_transform_value, AlmostGeodesicReport, Horofunction, Witness};
pub use linalg::{vector, Matrix, Vector};
pub use moment::{invert_moment_map, moment_jacobian, moment_map, potential, CompactifiedPoint, MomentResult};
pub use polytope::{ConeQueryResult, DroppedPoint, Face, Halfspace, Polytope, FACE_TOL};
pub use sequence::{Param, SequenceKind, SequenceSpec};
pub use space::NormedSpace;
