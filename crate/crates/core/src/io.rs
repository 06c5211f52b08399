//! JSON and CSV representations of polytopes, horofunctions and verdicts.
//!
//! Reals are written with 17 significant digits (`%.17g`), which round-trips
//! every `f64`.

use std::io;

use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::classify::{ClassificationVerdict, ConditionReport, Verdict};
use crate::error::{Error, Result};
use crate::horo::Horofunction;
use crate::linalg::Vector;
use crate::moment::CompactifiedPoint;
use crate::polytope::{Face, Polytope};
use crate::space::NormedSpace;

/// `%.17g`, always with a decimal point or exponent so the value reads back
/// as a float.
pub fn format_real(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0" } else { "0.0" }.into();
    }
    const PRECISION: i32 = 17;
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let mut out = if (-4..PRECISION).contains(&exp) {
        let fixed = format!("{:.*}", (PRECISION - 1 - exp) as usize, v);
        trim_zeros(&fixed)
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    };
    if !out.contains(['.', 'e']) {
        out.push_str(".0");
    }
    out
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

struct RealFormatter(PrettyFormatter<'static>);

impl Formatter for RealFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_real(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty-printed JSON with reals in `%.17g`, terminated by a newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RealFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing to memory");
    let mut s = String::from_utf8(buf).expect("serde_json writes UTF-8");
    s.push('\n');
    s
}

/// Parses JSON, mapping syntax and shape errors to [`Error::InvalidInput`].
pub fn from_json_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

fn coords(v: &Vector) -> Vec<f64> {
    v.as_slice().to_vec()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
pub struct PolytopeInput {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl PolytopeInput {
    pub fn build(&self, eps: f64) -> Result<Polytope> {
        let vertices = self.vertices.iter().map(|v| Vector::from_column_slice(v)).collect();
        Polytope::with_tolerance(self.dim, vertices, eps)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
pub struct HalfspaceDoc {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
pub struct FaceDoc {
    pub id: usize,
    pub dim: usize,
    pub vertex_indices: Vec<usize>,
    pub dual_vertex_indices: Vec<usize>,
}

impl From<&Face> for FaceDoc {
    fn from(f: &Face) -> Self {
        Self {
            id: f.id(),
            dim: f.dim(),
            vertex_indices: f.vertex_indices().to_vec(),
            dual_vertex_indices: f.dual_vertex_indices().to_vec(),
        }
    }
}

/// Full polytope record. Its `dim` and `vertices` fields make it a valid
/// [`PolytopeInput`] as well.
#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
pub struct PolytopeDoc {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub halfspaces: Vec<HalfspaceDoc>,
    pub faces: Vec<FaceDoc>,
}

impl From<&Polytope> for PolytopeDoc {
    fn from(p: &Polytope) -> Self {
        Self {
            dim: p.dim(),
            vertices: p.vertices().iter().map(coords).collect(),
            halfspaces: p
                .halfspaces()
                .iter()
                .map(|h| HalfspaceDoc {
                    normal: coords(h.normal()),
                    offset: h.offset(),
                })
                .collect(),
            faces: p.faces().iter().map(FaceDoc::from).collect(),
        }
    }
}

/// `h_{E,p}`; the indices refer to the vertices of `B°`, whose order follows
/// the halfspaces of `B`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
pub struct HorofunctionDoc {
    pub face_vertex_indices: Vec<usize>,
    pub p: Vec<f64>,
}

impl From<&Horofunction> for HorofunctionDoc {
    fn from(h: &Horofunction) -> Self {
        Self {
            face_vertex_indices: h.face().vertex_indices().to_vec(),
            p: coords(h.p()),
        }
    }
}

impl HorofunctionDoc {
    pub fn resolve(&self, space: &NormedSpace) -> Result<Horofunction> {
        let mut idx = self.face_vertex_indices.clone();
        idx.sort_unstable();
        idx.dedup();
        let face = space.dual().face_by_vertices(&idx).ok_or_else(|| {
            Error::NotAProperFace(format!(
                "vertex indices {:?} do not form a face of the dual ball",
                self.face_vertex_indices
            ))
        })?;
        space.horofunction(face, &Vector::from_column_slice(&self.p))
    }
}

/// Input of the `map` command: an interior point or a horofunction.
#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
#[serde(untagged)]
pub enum CompactifiedDoc {
    Interior { point: Vec<f64> },
    Boundary(HorofunctionDoc),
}

impl CompactifiedDoc {
    pub fn resolve(&self, space: &NormedSpace) -> Result<CompactifiedPoint> {
        match self {
            CompactifiedDoc::Interior { point } => Ok(CompactifiedPoint::Interior(Vector::from_column_slice(point))),
            CompactifiedDoc::Boundary(h) => Ok(CompactifiedPoint::Boundary(h.resolve(space)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
pub struct ReportDoc {
    pub face: FaceDoc,
    pub window: [usize; 2],
    pub max_norm: f64,
    pub cond0_unbounded: bool,
    pub cond1_in_cone: bool,
    pub cond2_boundary_distance_growth: bool,
    pub distance_first: f64,
    pub distance_last: f64,
    pub min_increment: f64,
    pub p_spread: f64,
    pub cond3_p_limit: Option<Vec<f64>>,
}

impl From<&ConditionReport> for ReportDoc {
    fn from(r: &ConditionReport) -> Self {
        Self {
            face: FaceDoc::from(&r.face),
            window: [r.window.0, r.window.1],
            max_norm: r.max_norm,
            cond0_unbounded: r.cond0_unbounded,
            cond1_in_cone: r.cond1_in_cone,
            cond2_boundary_distance_growth: r.cond2_boundary_distance_growth,
            distance_first: r.distance_first,
            distance_last: r.distance_last,
            min_increment: r.min_increment,
            p_spread: r.p_spread,
            cond3_p_limit: r.cond3_p_limit.as_ref().map(coords),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
pub struct VerdictDoc {
    /// `"bounded"`, `"horofunction"` or `"inconclusive"`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horofunction: Option<HorofunctionDoc>,
    pub reports: Vec<ReportDoc>,
    pub diagnostics: Vec<String>,
}

impl From<&ClassificationVerdict> for VerdictDoc {
    fn from(v: &ClassificationVerdict) -> Self {
        let (verdict, horofunction) = match &v.verdict {
            Verdict::Bounded => ("bounded", None),
            Verdict::Horofunction(h) => ("horofunction", Some(HorofunctionDoc::from(h))),
            Verdict::Inconclusive => ("inconclusive", None),
        };
        Self {
            verdict: verdict.into(),
            horofunction,
            reports: v.reports.iter().map(ReportDoc::from).collect(),
            diagnostics: v.diagnostics.clone(),
        }
    }
}

/// One CSV line from already formatted fields.
pub fn csv_row<S: AsRef<str>>(fields: &[S]) -> String {
    let mut line = fields.iter().map(|f| f.as_ref()).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Index lists inside a CSV field, separated by `;`.
pub fn csv_indices(indices: &[usize]) -> String {
    indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";")
}

/// Face table of `B` and `B°` with header
/// `body,face_id,dim,vertex_indices,dual_vertex_indices`.
pub fn faces_csv(space: &NormedSpace) -> String {
    let mut out = csv_row(&["body", "face_id", "dim", "vertex_indices", "dual_vertex_indices"]);
    for (body, p) in [("ball", space.ball()), ("dual", space.dual())] {
        for f in p.faces() {
            out.push_str(&csv_row(&[
                body.to_string(),
                f.id().to_string(),
                f.dim().to_string(),
                csv_indices(f.vertex_indices()),
                csv_indices(f.dual_vertex_indices()),
            ]));
        }
    }
    out
}
