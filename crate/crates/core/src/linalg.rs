//! Small dense linear-algebra helpers shared by the geometry routines.
//!
//! Everything here works on dynamically sized `nalgebra` vectors: the
//! dimensions we care about are tiny (m ≤ 6) and vary at runtime.

use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Relative threshold on singular values when deciding numerical rank.
pub const RANK_TOL: f64 = 1e-9;

pub fn vector(coords: &[f64]) -> Vector {
    DVector::from_column_slice(coords)
}

/// Stacks points as the columns of an `m × k` matrix.
pub fn column_matrix(dim: usize, points: &[Vector]) -> Matrix {
    let mut out = Matrix::zeros(dim, points.len());
    for (j, p) in points.iter().enumerate() {
        out.set_column(j, p);
    }
    out
}

/// Greedy column-pivoted Gram–Schmidt: repeatedly takes the column with the
/// largest residual, as long as that residual exceeds `RANK_TOL` times the
/// largest input norm. Returns the chosen column indices and an orthonormal
/// basis of their span.
fn pivoted_gram_schmidt(dim: usize, cols: &[Vector]) -> (Vec<usize>, Vec<Vector>) {
    let max_norm = cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut residual: Vec<Vector> = cols.to_vec();
    let mut chosen = Vec::new();
    let mut basis: Vec<Vector> = Vec::new();
    if max_norm == 0.0 {
        return (chosen, basis);
    }
    while basis.len() < dim {
        let Some((j, norm)) = residual
            .iter()
            .enumerate()
            .filter(|(j, _)| !chosen.contains(j))
            .map(|(j, r)| (j, r.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if norm <= RANK_TOL * max_norm {
            break;
        }
        // second pass against the original column restores orthogonality
        let mut q = cols[j].clone();
        for _ in 0..2 {
            for b in &basis {
                q -= b * b.dot(&q);
            }
        }
        let q = q.normalize();
        for r in residual.iter_mut() {
            let c = q.dot(r);
            *r -= &q * c;
        }
        chosen.push(j);
        basis.push(q);
    }
    (chosen, basis)
}

fn stack(dim: usize, cols: &[Vector]) -> Matrix {
    column_matrix(dim, cols)
}

/// Orthonormal basis (as columns) of the linear span of `points`.
pub fn span_basis(dim: usize, points: &[Vector]) -> Matrix {
    let (_, basis) = pivoted_gram_schmidt(dim, points);
    stack(dim, &basis)
}

/// Orthonormal basis of the orthogonal complement of the column space of an
/// orthonormal `basis`.
pub fn complement_basis(basis: &Matrix) -> Matrix {
    let dim = basis.nrows();
    let mut all: Vec<Vector> = basis.column_iter().map(|c| c.into_owned()).collect();
    let start = all.len();
    while all.len() < dim {
        // the coordinate axis least represented so far
        let best = (0..dim)
            .map(|k| {
                let mut e = Vector::zeros(dim);
                e[k] = 1.0;
                for _ in 0..2 {
                    for b in &all {
                        e -= b * b.dot(&e);
                    }
                }
                e
            })
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("dim > 0");
        all.push(best.normalize());
    }
    stack(dim, &all[start..])
}

/// Dimension of the affine hull of `points` (−1 is reported as 0 for the empty set).
pub fn affine_rank(dim: usize, points: &[Vector]) -> usize {
    match points.split_first() {
        None => 0,
        Some((first, rest)) => {
            let diffs: Vec<Vector> = rest.iter().map(|p| p - first).collect();
            span_basis(dim, &diffs).ncols()
        }
    }
}

/// Nonnegative least squares `min ‖A λ − b‖` subject to `λ ≥ 0`
/// (Lawson–Hanson active set). Columns of `a` may be linearly dependent.
pub fn nnls(a: &Matrix, b: &Vector) -> Vector {
    let k = a.ncols();
    let mut x = Vector::zeros(k);
    if k == 0 {
        return x;
    }
    let scale = a.norm().max(b.norm()).max(1.0);
    let tol = 1e-12 * scale * scale;
    let mut passive = vec![false; k];
    let max_outer = 3 * k + 10;

    for _ in 0..max_outer {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..k)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let j = match candidate {
            Some(j) if w[j] > tol => j,
            _ => break,
        };
        passive[j] = true;

        for _ in 0..max_outer {
            let z = passive_least_squares(a, b, &passive);
            let infeasible: Vec<usize> = (0..k).filter(|&i| passive[i] && z[i] <= 0.0).collect();
            if infeasible.is_empty() {
                x = z;
                break;
            }
            let alpha = infeasible
                .iter()
                .map(|&i| x[i] / (x[i] - z[i]))
                .fold(f64::INFINITY, f64::min);
            x += alpha * (&z - &x);
            for i in 0..k {
                if passive[i] && x[i] <= 1e-15 * scale {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    x
}

fn passive_least_squares(a: &Matrix, b: &Vector, passive: &[bool]) -> Vector {
    let cols: Vec<usize> = (0..passive.len()).filter(|&i| passive[i]).collect();
    let mut out = Vector::zeros(passive.len());
    if cols.is_empty() {
        return out;
    }
    // a basic solution on a maximal independent subset of the passive columns
    let vectors: Vec<Vector> = cols.iter().map(|&i| a.column(i).into_owned()).collect();
    let (chosen, _) = pivoted_gram_schmidt(a.nrows(), &vectors);
    if chosen.is_empty() {
        return out;
    }
    let sub = a.select_columns(chosen.iter().map(|&c| &cols[c]));
    let qr = sub.qr();
    let rhs = qr.q().transpose() * b;
    let sol = qr
        .r()
        .solve_upper_triangular(&rhs)
        .expect("independent columns give an invertible R");
    for (c, &k) in chosen.iter().enumerate() {
        out[cols[k]] = sol[c];
    }
    out
}

/// Euclidean projection of `x` onto the closed convex cone generated by the
/// columns of `generators`, returned with its distance to `x`.
pub fn project_onto_cone(generators: &Matrix, x: &Vector) -> (Vector, f64) {
    if generators.ncols() == 0 {
        return (Vector::zeros(x.len()), x.norm());
    }
    let coeffs = nnls(generators, x);
    let proj = generators * coeffs;
    let dist = (x - &proj).norm();
    (proj, dist)
}
