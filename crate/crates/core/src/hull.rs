//! Brute-force facet enumeration for small full-dimensional point sets.
//!
//! Every `dim`-subset of the input that spans a hyperplane is tested as a
//! supporting hyperplane; survivors are deduplicated by the set of points
//! they touch. Cost is `O(C(r, dim) · r)`, which is fine for r ≤ 64, dim ≤ 4.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::linalg::{complement_basis, span_basis, Vector};

/// A facet of the hull: `⟨normal|x⟩ ≥ offset` for all points, with equality
/// exactly on `tight`. `normal` has unit Euclidean length.
#[derive(Debug, Clone)]
pub(crate) struct RawFacet {
    pub normal: Vector,
    pub offset: f64,
    pub tight: Vec<usize>,
}

/// Largest absolute coordinate, floored at 1. Used to scale tolerances.
pub(crate) fn coordinate_scale(points: &[Vector]) -> f64 {
    points.iter().map(|p| p.amax()).fold(1.0, f64::max)
}

/// Facets of `conv(points)`; the points must affinely span `R^dim`.
pub(crate) fn hull_facets(dim: usize, points: &[Vector], eps: f64) -> Vec<RawFacet> {
    let scale = coordinate_scale(points);
    let tol = eps * scale;
    let mut found: BTreeMap<Vec<usize>, RawFacet> = BTreeMap::new();

    for combo in (0..points.len()).combinations(dim) {
        if found
            .keys()
            .any(|tight| combo.iter().all(|i| tight.binary_search(i).is_ok()))
        {
            continue;
        }
        let Some(normal) = hyperplane_normal(dim, points, &combo) else {
            continue;
        };
        let offset = normal.dot(&points[combo[0]]);
        let slack: Vec<f64> = points.iter().map(|p| normal.dot(p) - offset).collect();
        let sign = if slack.iter().all(|&s| s >= -tol) {
            1.0
        } else if slack.iter().all(|&s| s <= tol) {
            -1.0
        } else {
            continue;
        };
        let tight: Vec<usize> = (0..points.len()).filter(|&j| slack[j].abs() <= tol).collect();
        let refit = refit_facet(dim, points, &tight, sign * normal);
        found.entry(tight.clone()).or_insert(refit);
    }
    found.into_values().collect()
}

/// Unit normal of the hyperplane through the points indexed by `combo`, or
/// `None` when they are affinely dependent.
fn hyperplane_normal(dim: usize, points: &[Vector], combo: &[usize]) -> Option<Vector> {
    let base = &points[combo[0]];
    let diffs: Vec<Vector> = combo[1..].iter().map(|&i| &points[i] - base).collect();
    let span = span_basis(dim, &diffs);
    if span.ncols() + 1 != dim {
        return None;
    }
    Some(complement_basis(&span).column(0).into_owned())
}

/// Least-squares refit of a facet through all of its tight points, oriented
/// like `hint`.
fn refit_facet(dim: usize, points: &[Vector], tight: &[usize], hint: Vector) -> RawFacet {
    let centroid = tight
        .iter()
        .fold(Vector::zeros(dim), |acc, &i| acc + &points[i])
        / tight.len() as f64;
    let diffs: Vec<Vector> = tight.iter().map(|&i| &points[i] - &centroid).collect();
    let along = span_basis(dim, &diffs);
    let mut normal = &hint - &along * (along.transpose() * &hint);
    if normal.norm() < 0.5 {
        normal = hint;
    }
    let normal = normal.normalize();
    let offset = normal.dot(&centroid);
    RawFacet {
        normal,
        offset,
        tight: tight.to_vec(),
    }
}
