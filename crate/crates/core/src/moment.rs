//! The moment map `m^C(x) = Σ_i w_i(x) c_i`, `w_i ∝ e^{−⟨c_i|x⟩}`, its
//! inverse, and the induced map from the compactification onto `B°`.

use crate::error::{Error, Result};
use crate::horo::Horofunction;
use crate::hull::{coordinate_scale, hull_facets};
use crate::linalg::{complement_basis, span_basis, Matrix, Vector};
use crate::polytope::{Face, FACE_TOL};
use crate::space::NormedSpace;

pub const MAX_NEWTON_ITERATIONS: usize = 200;

/// Relative slack a target point must keep from the relative boundary before
/// [`invert_moment_map`] accepts it.
pub const INTERIOR_MARGIN: f64 = 1e-12;

const ARMIJO: f64 = 1e-4;
const POLISH_STEPS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct MomentResult {
    pub point: Vector,
    /// Softmax weights, one per vertex, summing to 1.
    pub weights: Vec<f64>,
}

fn check_input(vertices: &[Vector], x: &Vector) -> Result<()> {
    if vertices.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    if let Some(i) = vertices.iter().position(|c| c.len() != x.len()) {
        return Err(Error::InvalidInput(format!(
            "vertex {i} has {} coordinates, the point has {}",
            vertices[i].len(),
            x.len()
        )));
    }
    Ok(())
}

fn softmax_weights(vertices: &[Vector], x: &Vector) -> Vec<f64> {
    let exponents: Vec<f64> = vertices.iter().map(|c| -c.dot(x)).collect();
    let top = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = exponents.iter().map(|s| (s - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn weighted_sum(vertices: &[Vector], weights: &[f64]) -> Vector {
    vertices
        .iter()
        .zip(weights)
        .fold(Vector::zeros(vertices[0].len()), |acc, (c, w)| acc + *w * c)
}

pub fn moment_map(vertices: &[Vector], x: &Vector) -> Result<MomentResult> {
    check_input(vertices, x)?;
    let weights = softmax_weights(vertices, x);
    Ok(MomentResult {
        point: weighted_sum(vertices, &weights),
        weights,
    })
}

fn pair_jacobian(vertices: &[Vector], weights: &[f64]) -> Matrix {
    let dim = vertices[0].len();
    let mut j = Matrix::zeros(dim, dim);
    for i in 0..vertices.len() {
        for k in i + 1..vertices.len() {
            let d = &vertices[i] - &vertices[k];
            // scale after forming the outer product so that J stays exactly symmetric
            j -= (&d * d.transpose()) * (weights[i] * weights[k]);
        }
    }
    j
}

/// `∂m/∂x = −Σ_{i<k} w_i w_k (c_i − c_k)(c_i − c_k)ᵀ`.
pub fn moment_jacobian(vertices: &[Vector], x: &Vector) -> Result<Matrix> {
    check_input(vertices, x)?;
    Ok(pair_jacobian(vertices, &softmax_weights(vertices, x)))
}

/// The concave potential `f(x) = −ln Σ_i e^{−⟨c_i|x⟩}`, with `∇f = m^C`.
pub fn potential(vertices: &[Vector], x: &Vector) -> Result<f64> {
    check_input(vertices, x)?;
    Ok(log_partition(vertices, x))
}

fn log_partition(vertices: &[Vector], x: &Vector) -> f64 {
    let exponents: Vec<f64> = vertices.iter().map(|c| -c.dot(x)).collect();
    let top = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    -(top + exponents.iter().map(|s| (s - top).exp()).sum::<f64>().ln())
}

/// Affine frame of `conv(C)`: base point, orthonormal direction basis and
/// the vertices in those coordinates.
struct AffineFrame {
    base: Vector,
    basis: Matrix,
    coords: Vec<Vector>,
}

impl AffineFrame {
    fn new(vertices: &[Vector]) -> Self {
        let base = vertices[0].clone();
        let diffs: Vec<Vector> = vertices.iter().map(|c| c - &base).collect();
        let basis = span_basis(base.len(), &diffs);
        let coords = diffs.iter().map(|d| basis.transpose() * d).collect();
        Self { base, basis, coords }
    }
}

/// Solves `m^C(x) = y` by Newton's method on the concave potential
/// `φ(x) = f(x) − ⟨y|x⟩`, starting from `x = 0`.
///
/// The iteration runs in coordinates of the affine hull of `C`, so lower
/// dimensional vertex sets (faces) are handled without regularization; the
/// returned `x` lies in the direction space of that hull.
pub fn invert_moment_map(vertices: &[Vector], y: &Vector, tol: f64) -> Result<Vector> {
    check_input(vertices, y)?;
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let bad_tol = !(tol > 0.0);
    if bad_tol {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let frame = AffineFrame::new(vertices);
    let k = frame.basis.ncols();
    let offset = y - &frame.base;
    let target = frame.basis.transpose() * &offset;
    let scale = coordinate_scale(vertices);

    let off_hull = (&offset - &frame.basis * &target).norm();
    if off_hull > INTERIOR_MARGIN.max(FACE_TOL) * scale {
        return Err(Error::NotInInterior { slack: -off_hull });
    }
    if k == 0 {
        return Ok(Vector::zeros(y.len()));
    }
    let slack = interior_slack(k, &frame.coords, &target);
    if slack < INTERIOR_MARGIN * scale {
        return Err(Error::NotInInterior { slack });
    }

    let z = &frame.coords;
    let objective = |u: &Vector| log_partition(z, u) - target.dot(u);
    let mut u = Vector::zeros(k);
    let mut weights = softmax_weights(z, &u);
    let mut residual_vec = weighted_sum(z, &weights) - &target;
    let mut residual = residual_vec.norm();
    let mut polish = 0;

    for _ in 0..MAX_NEWTON_ITERATIONS {
        if residual <= tol {
            polish += 1;
            if polish > POLISH_STEPS {
                break;
            }
        }
        let neg_hessian = -pair_jacobian(z, &weights);
        let step = match neg_hessian.clone().cholesky() {
            Some(ch) => ch.solve(&residual_vec),
            None => {
                let reg = &neg_hessian + Matrix::identity(k, k) * 1e-12;
                match reg.cholesky() {
                    Some(ch) => ch.solve(&residual_vec),
                    None => break,
                }
            }
        };
        // φ increases along `step`: ∇φ = m − w and the slope is ⟨∇φ|step⟩ > 0
        let slope = residual_vec.dot(&step);
        let phi = objective(&u);
        let mut alpha = 1.0;
        let mut accepted = None;
        while alpha > 1e-20 {
            let trial = &u + alpha * &step;
            let trial_weights = softmax_weights(z, &trial);
            let trial_residual_vec = weighted_sum(z, &trial_weights) - &target;
            let trial_residual = trial_residual_vec.norm();
            if objective(&trial) >= phi + ARMIJO * alpha * slope || trial_residual < residual {
                accepted = Some((trial, trial_weights, trial_residual_vec, trial_residual));
                break;
            }
            alpha *= 0.5;
        }
        let Some((trial, trial_weights, trial_residual_vec, trial_residual)) = accepted else {
            break;
        };
        if residual <= tol && trial_residual > residual {
            break;
        }
        u = trial;
        weights = trial_weights;
        residual_vec = trial_residual_vec;
        residual = trial_residual;
    }

    if residual <= tol {
        Ok(&frame.basis * u)
    } else {
        Err(Error::NoConvergence {
            iterations: MAX_NEWTON_ITERATIONS,
            residual,
        })
    }
}

/// Smallest facet slack of `w` in the full-dimensional hull of `coords`.
fn interior_slack(k: usize, coords: &[Vector], w: &Vector) -> f64 {
    hull_facets(k, coords, FACE_TOL)
        .iter()
        .map(|f| f.normal.dot(w) - f.offset)
        .fold(f64::INFINITY, f64::min)
}

/// A point of the horofunction compactification.
#[derive(Debug, Clone, PartialEq)]
pub enum CompactifiedPoint {
    Interior(Vector),
    Boundary(Horofunction),
}

impl NormedSpace {
    /// `m^E(p)` for a proper face `E` of `B°`, evaluated in the frame of
    /// `V(F)^⊥`: `E = E^F + t` with `t` the common projection of `E` onto
    /// `V(F)`, and `m^E(p) = m^{E^F}(p) + t`.
    pub fn boundary_moment_map(&self, face: &Face, p: &Vector) -> Result<Vector> {
        let (frame, t) = self.face_frame(face, p)?;
        let coords: Vec<Vector> = face.vertices().iter().map(|e| frame.transpose() * e).collect();
        let local = moment_map(&coords, &(frame.transpose() * p))?;
        Ok(&frame * local.point + t)
    }

    /// `m^E(p)` computed directly in the ambient space at the reduced `p`.
    pub fn boundary_moment_map_direct(&self, face: &Face, p: &Vector) -> Result<Vector> {
        let face = self.dual().own_face(face)?;
        let p = self.reduce_p(face, p)?;
        Ok(moment_map(face.vertices(), &p)?.point)
    }

    fn face_frame(&self, face: &Face, p: &Vector) -> Result<(Matrix, Vector)> {
        if p.len() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "parameter has {} coordinates, expected {}",
                p.len(),
                self.dim()
            )));
        }
        let face = self.dual().own_face(face)?;
        let ball_face = self.ball_face_of(face)?;
        let span = ball_face.span_basis();
        let frame = complement_basis(&span);
        let e0 = &face.vertices()[0];
        let t = &span * (span.transpose() * e0);
        Ok((frame, t))
    }

    /// The homeomorphism onto `B°`: `x ↦ m^{B°}(x)`, `h_{E,p} ↦ m^E(p)`.
    pub fn compactification_point(&self, q: &CompactifiedPoint) -> Result<Vector> {
        match q {
            CompactifiedPoint::Interior(x) => {
                if x.len() != self.dim() {
                    return Err(Error::InvalidInput(format!(
                        "point has {} coordinates, expected {}",
                        x.len(),
                        self.dim()
                    )));
                }
                Ok(moment_map(self.dual().vertices(), x)?.point)
            }
            CompactifiedPoint::Boundary(h) => self.boundary_moment_map(h.face(), h.p()),
        }
    }
}
