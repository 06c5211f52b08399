use crate::error::Result;
use crate::linalg::Vector;
use crate::polytope::{Face, Polytope};

/// A finite-dimensional space normed by a polyhedral unit ball `B`, together
/// with its dual ball `B°`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormedSpace {
    ball: Polytope,
    dual: Polytope,
}

impl NormedSpace {
    pub fn new(ball: Polytope) -> Self {
        let dual = ball.polar_dual();
        Self { ball, dual }
    }

    pub fn from_vertices(dim: usize, vertices: Vec<Vector>) -> Result<Self> {
        Ok(Self::new(Polytope::from_vertices(dim, vertices)?))
    }

    pub fn dim(&self) -> usize {
        self.ball.dim()
    }

    pub fn ball(&self) -> &Polytope {
        &self.ball
    }

    pub fn dual(&self) -> &Polytope {
        &self.dual
    }

    pub fn norm(&self, x: &Vector) -> f64 {
        self.ball.gauge_norm(x)
    }

    /// `d(x, y) = ‖y − x‖`.
    pub fn distance(&self, x: &Vector, y: &Vector) -> f64 {
        self.norm(&(y - x))
    }

    /// Symmetrized distance `d(x, y) + d(y, x)`.
    pub fn symmetric_distance(&self, x: &Vector, y: &Vector) -> f64 {
        self.distance(x, y) + self.distance(y, x)
    }

    /// Face `E = F°` of `B°` for a face `F` of `B`.
    pub fn dual_of_ball_face(&self, face: &Face) -> Result<Face> {
        self.ball.dual_face(&self.dual, face)
    }

    /// Face `F = E°` of `B` for a face `E` of `B°`.
    pub fn ball_face_of(&self, dual_face: &Face) -> Result<Face> {
        self.dual.dual_face(&self.ball, dual_face)
    }
}
