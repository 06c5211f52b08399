//! Full-dimensional polytopes around the origin, their polar duals and face
//! lattices.
//!
//! Conventions:
//! - Halfspaces are stored as `⟨normal|x⟩ ≥ -1`. With the origin strictly
//!   inside, every facet can be scaled this way, and then the facet normals
//!   are exactly the vertices of the polar `{y : ⟨y|x⟩ ≥ -1 ∀x}`.
//! - [`Polytope::polar_dual`] keeps the two index spaces aligned: dual vertex
//!   `j` is the normal of halfspace `j`, and dual halfspace `i` is the one
//!   generated by vertex `i`. A face's `dual_vertex_indices` are therefore
//!   the vertex indices of its dual face.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hull::{coordinate_scale, hull_facets};
use crate::linalg::{affine_rank, column_matrix, project_onto_cone, span_basis, Vector};

/// Default incidence/membership tolerance.
pub const FACE_TOL: f64 = 1e-9;

/// `⟨normal|x⟩ ≥ offset`, tight on `vertex_indices`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    normal: Vector,
    offset: f64,
    vertex_indices: Vec<usize>,
}

impl Halfspace {
    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Vertices of the parent polytope lying on this facet.
    pub fn vertex_indices(&self) -> &[usize] {
        &self.vertex_indices
    }
}

/// A proper, nonempty face of a polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    id: usize,
    dim: usize,
    vertex_indices: Vec<usize>,
    dual_vertex_indices: Vec<usize>,
    vertices: Vec<Vector>,
}

impl Face {
    /// Position in the parent's face list.
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_indices(&self) -> &[usize] {
        &self.vertex_indices
    }

    /// Indices of the facets containing this face, which are also the vertex
    /// indices of the dual face in the polar polytope.
    pub fn dual_vertex_indices(&self) -> &[usize] {
        &self.dual_vertex_indices
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Barycenter of the vertices; lies in the relative interior.
    pub fn centroid(&self) -> Vector {
        let sum = self
            .vertices
            .iter()
            .fold(Vector::zeros(self.ambient_dim()), |acc, v| acc + v);
        sum / self.vertices.len() as f64
    }

    /// Orthonormal basis of `V(F)`, the linear span of the face.
    pub fn span_basis(&self) -> crate::linalg::Matrix {
        span_basis(self.ambient_dim(), &self.vertices)
    }

    /// Splits `x` into its orthogonal projections onto `V(F)` and `V(F)^⊥`.
    pub fn project_split(&self, x: &Vector) -> (Vector, Vector) {
        let basis = self.span_basis();
        if basis.ncols() == x.len() {
            return (x.clone(), Vector::zeros(x.len()));
        }
        let along = &basis * (basis.transpose() * x);
        let perp = x - &along;
        (along, perp)
    }

    /// True if the vertex set of `self` is contained in that of `other`.
    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.vertex_indices
            .iter()
            .all(|i| other.vertex_indices.binary_search(i).is_ok())
    }
}

/// Input point discarded during construction because it is not extreme.
#[derive(Debug, Clone, PartialEq)]
pub struct DroppedPoint {
    pub input_index: usize,
    pub point: Vector,
}

/// Result of a query against the closed cone over a face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeQueryResult {
    pub inside: bool,
    /// Euclidean distance from the query point to the relative boundary of the
    /// cone (the cones over the proper subfaces, plus the origin).
    pub rel_boundary_distance: f64,
}

/// Full-dimensional bounded polytope with the origin in its interior.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    halfspaces: Vec<Halfspace>,
    faces: Vec<Face>,
    dropped: Vec<DroppedPoint>,
    eps: f64,
}

impl Polytope {
    /// Builds the polytope `conv(points)` with the default tolerance.
    pub fn from_vertices(dim: usize, points: Vec<Vector>) -> Result<Self> {
        Self::with_tolerance(dim, points, FACE_TOL)
    }

    /// Builds `conv(points)`, validating the standing assumptions and
    /// discarding non-extreme input points.
    pub fn with_tolerance(dim: usize, points: Vec<Vector>, eps: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {eps}")));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput(format!("point {i} is not finite")));
            }
        }
        let scale = coordinate_scale(&points);
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if (&points[i] - &points[j]).amax() <= eps * scale {
                    return Err(Error::DuplicateVertex { first: i, second: j });
                }
            }
        }
        let affine_dim = affine_rank(dim, &points);
        if points.len() < dim + 1 || affine_dim < dim {
            return Err(Error::NotFullDimensional { dim, affine_dim });
        }

        let raw = hull_facets(dim, &points, eps);
        if raw.iter().any(|f| f.offset >= -eps * scale) {
            return Err(Error::OriginNotInterior);
        }

        let extreme: Vec<bool> = (0..points.len())
            .map(|j| {
                let normals: Vec<Vector> = raw
                    .iter()
                    .filter(|f| f.tight.contains(&j))
                    .map(|f| f.normal.clone())
                    .collect();
                span_basis(dim, &normals).ncols() == dim
            })
            .collect();

        let mut new_index = vec![usize::MAX; points.len()];
        let mut vertices = Vec::new();
        let mut dropped = Vec::new();
        for (j, p) in points.into_iter().enumerate() {
            if extreme[j] {
                new_index[j] = vertices.len();
                vertices.push(p);
            } else {
                dropped.push(DroppedPoint {
                    input_index: j,
                    point: p,
                });
            }
        }

        let halfspaces = raw
            .into_iter()
            .map(|f| {
                let mut tight: Vec<usize> = f
                    .tight
                    .iter()
                    .filter(|&&j| extreme[j])
                    .map(|&j| new_index[j])
                    .collect();
                tight.sort_unstable();
                let fallback = &f.normal / (-f.offset);
                Halfspace {
                    normal: polar_normal(dim, &vertices, &tight)
                        .filter(|n| (n - &fallback).amax() <= 1e-6 * fallback.amax())
                        .unwrap_or(fallback),
                    offset: -1.0,
                    vertex_indices: tight,
                }
            })
            .collect();

        Ok(Self::assemble(dim, vertices, halfspaces, dropped, eps))
    }

    /// Completes a polytope from consistent vertex and facet data by closing
    /// the facet vertex sets under intersection.
    fn assemble(
        dim: usize,
        vertices: Vec<Vector>,
        halfspaces: Vec<Halfspace>,
        dropped: Vec<DroppedPoint>,
        eps: f64,
    ) -> Self {
        let facet_sets: Vec<&[usize]> = halfspaces.iter().map(|h| h.vertex_indices()).collect();
        let mut sets: BTreeSet<Vec<usize>> = facet_sets.iter().map(|s| s.to_vec()).collect();
        let mut frontier: Vec<Vec<usize>> = sets.iter().cloned().collect();
        while let Some(set) = frontier.pop() {
            for facet in &facet_sets {
                let meet: Vec<usize> = set
                    .iter()
                    .copied()
                    .filter(|i| facet.binary_search(i).is_ok())
                    .collect();
                if !meet.is_empty() && sets.insert(meet.clone()) {
                    frontier.push(meet);
                }
            }
        }

        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|vertex_indices| {
                let verts: Vec<Vector> = vertex_indices.iter().map(|&i| vertices[i].clone()).collect();
                let dual_vertex_indices = facet_sets
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| vertex_indices.iter().all(|i| f.binary_search(i).is_ok()))
                    .map(|(j, _)| j)
                    .collect();
                Face {
                    id: 0,
                    dim: affine_rank(dim, &verts),
                    vertex_indices,
                    dual_vertex_indices,
                    vertices: verts,
                }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertex_indices).cmp(&(b.dim, &b.vertex_indices)));
        for (id, f) in faces.iter_mut().enumerate() {
            f.id = id;
        }

        Self {
            dim,
            vertices,
            halfspaces,
            faces,
            dropped,
            eps,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// All proper nonempty faces, sorted by dimension then vertex indices.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == k)
    }

    /// Input points that were not extreme and have been discarded.
    pub fn dropped(&self) -> &[DroppedPoint] {
        &self.dropped
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn face_by_vertices(&self, vertex_indices: &[usize]) -> Option<&Face> {
        let mut key = vertex_indices.to_vec();
        key.sort_unstable();
        key.dedup();
        self.faces.iter().find(|f| f.vertex_indices == key)
    }

    /// Looks `face` up in this polytope's lattice.
    pub fn own_face(&self, face: &Face) -> Result<&Face> {
        match self.faces.get(face.id) {
            Some(f) if f.vertex_indices == face.vertex_indices && f.vertices == face.vertices => Ok(f),
            _ => Err(Error::NotAProperFace(format!(
                "vertex set {:?} is not a proper face of this polytope",
                face.vertex_indices
            ))),
        }
    }

    /// Membership test with the polytope's tolerance.
    pub fn contains(&self, x: &Vector) -> bool {
        self.halfspaces
            .iter()
            .all(|h| h.normal.dot(x) >= h.offset - self.eps)
    }

    /// The polar `{y : ⟨y|x⟩ ≥ -1 for all x in self}` with aligned indexing
    /// (see the module docs).
    pub fn polar_dual(&self) -> Polytope {
        let vertices: Vec<Vector> = self.halfspaces.iter().map(|h| h.normal.clone()).collect();
        let halfspaces = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, c)| Halfspace {
                normal: c.clone(),
                offset: -1.0,
                vertex_indices: (0..self.halfspaces.len())
                    .filter(|&j| self.halfspaces[j].vertex_indices.binary_search(&i).is_ok())
                    .collect(),
            })
            .collect();
        Self::assemble(self.dim, vertices, halfspaces, Vec::new(), self.eps)
    }

    /// The face of `dual` pairing to −1 with every vertex of `face`.
    ///
    /// `dual` must be `self.polar_dual()` (or any polytope with the same
    /// vertex order).
    pub fn dual_face(&self, dual: &Polytope, face: &Face) -> Result<Face> {
        let face = self.own_face(face)?;
        let scale = coordinate_scale(&dual.vertices).max(coordinate_scale(&self.vertices));
        let tol = self.eps * scale * scale;
        let s_e: Vec<usize> = (0..dual.vertices.len())
            .filter(|&j| {
                face.vertices
                    .iter()
                    .all(|f| (dual.vertices[j].dot(f) + 1.0).abs() <= tol)
            })
            .collect();
        dual.face_by_vertices(&s_e).cloned().ok_or_else(|| {
            Error::NotAProperFace(format!(
                "dual vertex set {s_e:?} of face {:?} is not a face of the dual",
                face.vertex_indices
            ))
        })
    }

    /// Membership in the closed cone over `face` and distance to its relative
    /// boundary.
    pub fn cone_query(&self, face: &Face, x: &Vector) -> ConeQueryResult {
        let generators = column_matrix(self.dim, face.vertices());
        let (_, dist_to_cone) = project_onto_cone(&generators, x);
        let inside = dist_to_cone <= self.eps * (1.0 + x.norm());
        ConeQueryResult {
            inside,
            rel_boundary_distance: self.rel_boundary_distance(face, x),
        }
    }

    fn rel_boundary_distance(&self, face: &Face, x: &Vector) -> f64 {
        if face.dim == 0 {
            return x.norm();
        }
        self.faces
            .iter()
            .filter(|g| g.dim + 1 == face.dim && g.is_subface_of(face))
            .map(|g| project_onto_cone(&column_matrix(self.dim, g.vertices()), x).1)
            .fold(x.norm(), f64::min)
    }
}

/// `n` with `⟨n|v⟩ = −1` on the tight vertices of a facet: an exact solve
/// when the facet is a simplex, least squares otherwise.
fn polar_normal(dim: usize, vertices: &[Vector], tight: &[usize]) -> Option<Vector> {
    let a = crate::linalg::Matrix::from_fn(tight.len(), dim, |r, c| vertices[tight[r]][c]);
    let rhs = Vector::from_element(tight.len(), -1.0);
    let n = if tight.len() == dim {
        a.lu().solve(&rhs)?
    } else {
        let qr = a.qr();
        qr.r().solve_upper_triangular(&(qr.q().transpose() * rhs))?
    };
    n.iter().all(|x| x.is_finite()).then_some(n)
}
