use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("InvalidInput: {0}")]
    InvalidInput(String),

    #[error("NotFullDimensional: affine hull has dimension {affine_dim}, expected {dim}")]
    NotFullDimensional { dim: usize, affine_dim: usize },

    #[error("OriginNotInterior: the origin is not strictly inside the convex hull")]
    OriginNotInterior,

    #[error("DuplicateVertex: input points {first} and {second} coincide")]
    DuplicateVertex { first: usize, second: usize },

    #[error("NotAProperFace: {0}")]
    NotAProperFace(String),

    #[error("EmptyVertexSet: pseudo-norm needs at least one vertex")]
    EmptyVertexSet,

    #[error("WitnessSearchFailed: no separating point found (gap {gap:e})")]
    WitnessSearchFailed { gap: f64 },

    #[error("EvalError: {0}")]
    EvalError(String),

    #[error("NotInInterior: target has slack {slack:e} to the relative boundary")]
    NotInInterior { slack: f64 },

    #[error("NoConvergence: residual {residual:e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },
}

impl Error {
    /// True for failures of an iterative numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}
