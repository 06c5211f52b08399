//! Horofunctions `h_{E,p}(y) = |p − y|_E − |p|_E` of a polyhedral normed space,
//! the internal points `ψ_z(y) = ‖z − y‖ − ‖z‖`, and related checks.
//!
//! The basepoint is fixed at the origin throughout.

use crate::error::{Error, Result};
use crate::gauge::pseudo_norm;
use crate::linalg::Vector;
use crate::polytope::Face;
use crate::space::NormedSpace;

/// Two horofunctions are considered equal when their faces agree and their
/// reduced parameters differ by at most this much.
pub const EQUALITY_TOL: f64 = 1e-9;

/// Minimum value gap accepted from [`NormedSpace::distinguishing_witness`].
pub const WITNESS_GAP: f64 = 1e-6;

/// Boundary point `h_{E,p}`: a proper face `E` of the dual ball and a
/// parameter `p` in `V(F)^⊥`, where `F = E°`.
#[derive(Debug, Clone, PartialEq)]
pub struct Horofunction {
    face: Face,
    p: Vector,
}

impl Horofunction {
    /// The face `E` of `B°`.
    pub fn face(&self) -> &Face {
        &self.face
    }

    pub fn p(&self) -> &Vector {
        &self.p
    }

    pub fn value(&self, y: &Vector) -> f64 {
        let e = self.face.vertices();
        // faces are never empty
        pseudo_norm(e, &(&self.p - y)).unwrap() - pseudo_norm(e, &self.p).unwrap()
    }

    pub fn approx_eq(&self, other: &Horofunction) -> bool {
        self.face.vertex_indices() == other.face.vertex_indices()
            && (&self.p - &other.p).norm() <= EQUALITY_TOL
    }
}

/// Legendre–Fenchel transform of `f_{E,p} = I_E + ⟨·|p⟩ − min_E ⟨·|p⟩`,
/// evaluated at `y` as a supremum over the vertices of `E`.
pub fn lf_transform_value(face_vertices: &[Vector], p: &Vector, y: &Vector) -> f64 {
    let inf_term = face_vertices
        .iter()
        .map(|q| q.dot(p))
        .fold(f64::INFINITY, f64::min);
    face_vertices
        .iter()
        .map(|x| x.dot(y) - (x.dot(p) - inf_term))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Equal,
    /// A point where the two horofunctions differ by more than [`WITNESS_GAP`].
    Point(Vector),
}

/// Outcome of [`NormedSpace::almost_geodesic_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostGeodesicReport {
    /// Smallest sample index `N` from which the defining inequality holds for
    /// every sampled pair `N ≤ s ≤ t`, if that tail covers at least half the
    /// samples.
    pub tail_start: Option<usize>,
    /// Largest excess `d(γ0,γs) + d(γs,γt) − d(γ0,γt)` over each suffix.
    pub suffix_excess: Vec<f64>,
}

impl AlmostGeodesicReport {
    pub fn holds(&self) -> bool {
        self.tail_start.is_some()
    }
}

impl NormedSpace {
    /// Orthogonal projection of `p` onto `V(F)^⊥`, `F` the face of `B` dual to
    /// the face `E` of `B°`.
    pub fn reduce_p(&self, face: &Face, p: &Vector) -> Result<Vector> {
        let ball_face = self.ball_face_of(face)?;
        Ok(ball_face.project_split(p).1)
    }

    /// `h_{E,p}` with `p` reduced to `V(F)^⊥`.
    pub fn horofunction(&self, face: &Face, p: &Vector) -> Result<Horofunction> {
        if p.len() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "parameter has {} coordinates, expected {}",
                p.len(),
                self.dim()
            )));
        }
        let face = self.dual().own_face(face)?.clone();
        let p = self.reduce_p(&face, p)?;
        Ok(Horofunction { face, p })
    }

    /// `ψ_z(y) = d(y, z) − d(0, z) = ‖z − y‖ − ‖z‖`.
    pub fn psi_value(&self, z: &Vector, y: &Vector) -> f64 {
        self.norm(&(z - y)) - self.norm(z)
    }

    /// A point separating two horofunctions, or [`Witness::Equal`].
    ///
    /// Distinct faces: with `dim E1 ≥ dim E2`, take a vertex `u` of `E1` not in
    /// `E2` and push `y = p1 − t·f` deep into the cone over the facet `{u}°`
    /// (`f` its barycenter). Same face: the two values at `p1` and `p2` differ
    /// in total by the width of `E` in direction `p1 − p2`, which is positive
    /// on `V(F)^⊥`, so one of them separates.
    pub fn distinguishing_witness(&self, h1: &Horofunction, h2: &Horofunction) -> Result<Witness> {
        let gap = |y: &Vector| (h1.value(y) - h2.value(y)).abs();

        if h1.face.vertex_indices() == h2.face.vertex_indices() {
            if (&h1.p - &h2.p).norm() <= EQUALITY_TOL {
                return Ok(Witness::Equal);
            }
            let (g1, g2) = (gap(&h1.p), gap(&h2.p));
            let (best, best_gap) = if g1 >= g2 { (&h1.p, g1) } else { (&h2.p, g2) };
            return if best_gap > WITNESS_GAP {
                Ok(Witness::Point(best.clone()))
            } else {
                Err(Error::WitnessSearchFailed { gap: best_gap })
            };
        }

        let (big, small) = if h1.face.dim() >= h2.face.dim() { (h1, h2) } else { (h2, h1) };
        if gap(&big.p) > WITNESS_GAP {
            return Ok(Witness::Point(big.p.clone()));
        }
        let u = big
            .face
            .vertex_indices()
            .iter()
            .copied()
            .find(|i| !small.face.vertex_indices().contains(i))
            .expect("a face of larger or equal dimension is not contained in a different face");
        let facet = &self.ball().halfspaces()[u];
        let f = facet
            .vertex_indices()
            .iter()
            .fold(Vector::zeros(self.dim()), |acc, &i| acc + &self.ball().vertices()[i])
            / facet.vertex_indices().len() as f64;

        let mut best_gap = 0.0_f64;
        let mut t = 1.0;
        while t <= 1e6 {
            let y = &big.p - t * &f;
            let g = gap(&y);
            if g > WITNESS_GAP {
                return Ok(Witness::Point(y));
            }
            best_gap = best_gap.max(g);
            t *= 10.0;
        }
        Err(Error::WitnessSearchFailed { gap: best_gap })
    }

    /// Scans a sampled path for the almost-geodesic property at tolerance `eps`.
    ///
    /// The path's own parameter is replaced by the distance from its start,
    /// so the quantity checked is the triangle excess
    /// `d(γ(0),γ(s)) + d(γ(s),γ(t)) − d(γ(0),γ(t))` for sampled `s ≤ t`. For
    /// unit-speed paths this is the textbook condition.
    pub fn almost_geodesic_check(&self, path: &[(f64, Vector)], eps: f64) -> Result<AlmostGeodesicReport> {
        if path.len() < 3 {
            return Err(Error::InvalidInput("a path needs at least 3 samples".into()));
        }
        // also rejects NaN parameters
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        let unordered = path.windows(2).any(|w| !(w[1].0 > w[0].0));
        if unordered {
            return Err(Error::InvalidInput("path parameters must be strictly increasing".into()));
        }
        let start = &path[0].1;
        let from_start: Vec<f64> = path.iter().map(|(_, g)| self.distance(start, g)).collect();
        let n = path.len();
        let mut suffix_excess = vec![0.0; n];
        let mut running = 0.0_f64;
        for s in (0..n).rev() {
            let worst = (s..n)
                .map(|t| {
                    (from_start[s] + self.distance(&path[s].1, &path[t].1) - from_start[t]).abs()
                })
                .fold(0.0, f64::max);
            running = running.max(worst);
            suffix_excess[s] = running;
        }
        let first = (0..n).find(|&k| suffix_excess[k] < eps);
        let tail_start = first.filter(|&k| k <= (n - 1) / 2);
        Ok(AlmostGeodesicReport {
            tail_start,
            suffix_excess,
        })
    }
}
