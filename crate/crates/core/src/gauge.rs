//! Polyhedral gauges `‖x‖_C = inf{α > 0 : x ∈ αC}` and the pseudo-norm
//! `|x|_R = -min over R of ⟨q|x⟩`.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::polytope::Polytope;

impl Polytope {
    /// Minkowski functional of the polytope, evaluated as
    /// `max_j -⟨u_j|x⟩` over the vertices `u_j` of the polar (the stored
    /// halfspace normals). Possibly asymmetric.
    pub fn gauge_norm(&self, x: &Vector) -> f64 {
        let value = self
            .halfspaces()
            .iter()
            .map(|h| -h.normal().dot(x))
            .fold(f64::NEG_INFINITY, f64::max);
        // x = 0 gives a max of (signed) zeros
        value.max(0.0)
    }
}

/// `-min_i ⟨e_i|x⟩` over a vertex list. Not a norm in general: it can be
/// negative, and it is only positively homogeneous.
pub fn pseudo_norm(vertices: &[Vector], x: &Vector) -> Result<f64> {
    if vertices.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    Ok(-vertices
        .iter()
        .map(|e| e.dot(x))
        .fold(f64::INFINITY, f64::min))
}
