//! The L¹ running example written out as data files.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use horoball::io::{csv_indices, csv_row, faces_csv, format_real, to_json_string, PolytopeDoc, VerdictDoc};
use horoball::linalg::complement_basis;
use horoball::{moment_map, vector, NormedSpace, SequenceSpec, Tolerances, Vector};
use serde::Serialize;

pub const GRID_SIDE: usize = 50;
pub const GRID_HALF_WIDTH: f64 = 5.0;
pub const P_GRID: usize = 11;

#[derive(Serialize)]
struct NamedVerdict {
    name: &'static str,
    sequence: SequenceSpec,
    #[serde(flatten)]
    verdict: VerdictDoc,
}

pub fn l1_space() -> NormedSpace {
    let v = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
    NormedSpace::from_vertices(2, v.iter().map(|c| vector(c)).collect()).expect("L1 ball is valid")
}

pub fn example_sequences() -> Vec<(&'static str, SequenceSpec)> {
    vec![
        ("(n, 2)", SequenceSpec::affine(0.0, 2.0, 1000)),
        ("(n, n)", SequenceSpec::affine(1.0, 0.0, 1000)),
        ("(n, 1/n)", SequenceSpec::power(1.0, -1.0, 1000)),
        ("(n, sin(5n)/2 + 1)", SequenceSpec::sinusoid(0.5, 5.0, 1.0, 1000)),
        ("(n, log 2n)", SequenceSpec::log(1.0, 2.0, 1000)),
    ]
}

fn moment_grid(space: &NormedSpace) -> Result<String> {
    let mut out = csv_row(&["x1", "x2", "m1", "m2"]);
    let step = 2.0 * GRID_HALF_WIDTH / (GRID_SIDE - 1) as f64;
    for i in 0..GRID_SIDE {
        for j in 0..GRID_SIDE {
            let x = vector(&[-GRID_HALF_WIDTH + step * i as f64, -GRID_HALF_WIDTH + step * j as f64]);
            let m = moment_map(space.dual().vertices(), &x)?.point;
            out.push_str(&csv_row(&[
                format_real(x[0]),
                format_real(x[1]),
                format_real(m[0]),
                format_real(m[1]),
            ]));
        }
    }
    Ok(out)
}

/// `m^E(p)` for `p = t·u`, `t ∈ {−5, …, 5}` and `u` the first basis vector of
/// `V(F)^⊥` (zero when `F` is a facet).
fn boundary_images(space: &NormedSpace) -> Result<String> {
    let mut out = csv_row(&["face_id", "dim", "vertex_indices", "p1", "p2", "m1", "m2"]);
    for e in space.dual().faces() {
        let f = space.ball_face_of(e)?;
        let perp = complement_basis(&f.span_basis());
        let dir = if perp.ncols() > 0 {
            perp.column(0).into_owned()
        } else {
            Vector::zeros(space.dim())
        };
        for k in 0..P_GRID {
            let t = k as f64 - (P_GRID / 2) as f64;
            let p = &dir * t;
            let m = space.boundary_moment_map(e, &p)?;
            out.push_str(&csv_row(&[
                e.id().to_string(),
                e.dim().to_string(),
                csv_indices(e.vertex_indices()),
                format_real(p[0]),
                format_real(p[1]),
                format_real(m[0]),
                format_real(m[1]),
            ]));
        }
    }
    Ok(out)
}

/// Writes the demo files into `dir` and returns how many were written.
pub fn write_demo(dir: &Path, tol: &Tolerances) -> Result<usize> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let space = l1_space();
    let mut verdicts = Vec::new();
    for (name, spec) in example_sequences() {
        let v = space.classify(&spec, tol)?;
        verdicts.push(NamedVerdict {
            name,
            sequence: spec,
            verdict: VerdictDoc::from(&v),
        });
    }
    let files = [
        ("ball.json", to_json_string(&PolytopeDoc::from(space.ball()))),
        ("dual.json", to_json_string(&PolytopeDoc::from(space.dual()))),
        ("faces.csv", faces_csv(&space)),
        ("verdicts.json", to_json_string(&verdicts)),
        ("moment_grid.csv", moment_grid(&space)?),
        ("boundary_images.csv", boundary_images(&space)?),
    ];
    for (name, text) in &files {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(files.len())
}
