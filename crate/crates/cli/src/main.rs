use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use horoball::io::{
    csv_indices, csv_row, faces_csv, format_real, from_json_str, to_json_string, CompactifiedDoc, PolytopeDoc,
    PolytopeInput, VerdictDoc,
};
use horoball::{
    invert_moment_map, moment_map, pseudo_norm, NormedSpace, SequenceSpec, Tolerances, Vector, FACE_TOL,
};
use serde::Serialize;

mod demo;

/// Polyhedral norms, their horofunction boundary and the moment map.
#[derive(Debug, Parser)]
#[command(name = "horoball", version)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct GlobalOpts {
    /// Tolerance for face membership and vertex deduplication.
    #[arg(long, global = true, default_value_t = FACE_TOL)]
    tol_face: f64,
    /// Tail diameter allowed for the projected sequence (classifier ε_p).
    #[arg(long, global = true, default_value_t = Tolerances::default().p_tol)]
    tol_p: f64,
    /// Number of samples, overriding the sequence file.
    #[arg(long, global = true)]
    horizon: Option<usize>,
    /// Length of the classifier's tail window.
    #[arg(long, global = true, default_value_t = Tolerances::default().window)]
    window: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dual ball of a polytope, with faces and dual-face links.
    Dual { polytope: PathBuf },
    /// Classify a sequence against the horofunctions of the norm.
    Classify { polytope: PathBuf, sequence: PathBuf },
    /// Image in the dual ball of an interior point or a horofunction.
    Map { polytope: PathBuf, point: PathBuf },
    /// Gauge norm of a point.
    Gauge {
        polytope: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
    },
    /// −min ⟨q|x⟩ over the vertices of a point set.
    PseudoNorm {
        vertices: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
    },
    /// Moment map of a vertex set at a point.
    Moment {
        vertices: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
    },
    /// Preimage of an interior point under the moment map.
    Invert {
        vertices: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
        /// Newton residual tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Write the L¹ running example as JSON/CSV data files.
    Demo {
        #[arg(long, default_value = "horoball-demo")]
        dir: PathBuf,
    },
}

#[derive(Serialize)]
struct ValueDoc {
    value: f64,
}

#[derive(Serialize)]
struct PointDoc {
    point: Vec<f64>,
}

#[derive(Serialize)]
struct MomentDoc {
    point: Vec<f64>,
    weights: Vec<f64>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_space(path: &Path, opts: &GlobalOpts) -> Result<NormedSpace> {
    let input: PolytopeInput = from_json_str(&read(path)?)?;
    Ok(NormedSpace::new(input.build(opts.tol_face)?))
}

fn load_vertices(path: &Path) -> Result<Vec<Vector>> {
    let input: PolytopeInput = from_json_str(&read(path)?)?;
    if let Some(v) = input.vertices.iter().find(|v| v.len() != input.dim) {
        anyhow::bail!(horoball::Error::InvalidInput(format!(
            "vertex {v:?} does not have {} coordinates",
            input.dim
        )));
    }
    Ok(input.vertices.iter().map(|v| Vector::from_column_slice(v)).collect())
}

fn tolerances(opts: &GlobalOpts) -> Tolerances {
    Tolerances {
        window: opts.window,
        p_tol: opts.tol_p,
        ..Tolerances::default()
    }
}

fn reals(v: &[f64]) -> Vec<String> {
    v.iter().map(|x| format_real(*x)).collect()
}

fn point_csv(header: &str, v: &[f64]) -> String {
    let names: Vec<String> = (1..=v.len()).map(|i| format!("{header}{i}")).collect();
    csv_row(&names) + &csv_row(&reals(v))
}

fn render<T: Serialize>(doc: &T, format: Format, csv: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => to_json_string(doc),
        Format::Csv => csv(),
    }
}

fn run(cli: Cli) -> Result<()> {
    let opts = &cli.opts;
    let text = match cli.command {
        Command::Dual { polytope } => {
            let space = load_space(&polytope, opts)?;
            render(&PolytopeDoc::from(space.dual()), opts.format, || faces_csv(&space))
        }
        Command::Classify { polytope, sequence } => {
            let space = load_space(&polytope, opts)?;
            let mut spec: SequenceSpec = from_json_str(&read(&sequence)?)?;
            if opts.horizon.is_some() {
                spec.horizon = opts.horizon;
            }
            let verdict = space.classify(&spec, &tolerances(opts))?;
            let doc = VerdictDoc::from(&verdict);
            render(&doc, opts.format, || verdict_csv(&doc))
        }
        Command::Map { polytope, point } => {
            let space = load_space(&polytope, opts)?;
            let q: CompactifiedDoc = from_json_str(&read(&point)?)?;
            let y = space.compactification_point(&q.resolve(&space)?)?;
            let doc = PointDoc {
                point: y.as_slice().to_vec(),
            };
            render(&doc, opts.format, || point_csv("y", &doc.point))
        }
        Command::Gauge { polytope, point } => {
            let space = load_space(&polytope, opts)?;
            check_dim(&point, space.dim())?;
            let doc = ValueDoc {
                value: space.norm(&Vector::from_vec(point)),
            };
            render(&doc, opts.format, || point_csv("value", &[doc.value]))
        }
        Command::PseudoNorm { vertices, point } => {
            let c = load_vertices(&vertices)?;
            let doc = ValueDoc {
                value: pseudo_norm(&c, &Vector::from_vec(point))?,
            };
            render(&doc, opts.format, || point_csv("value", &[doc.value]))
        }
        Command::Moment { vertices, point } => {
            let c = load_vertices(&vertices)?;
            let m = moment_map(&c, &Vector::from_vec(point))?;
            let doc = MomentDoc {
                point: m.point.as_slice().to_vec(),
                weights: m.weights,
            };
            render(&doc, opts.format, || point_csv("y", &doc.point))
        }
        Command::Invert { vertices, point, tol } => {
            let c = load_vertices(&vertices)?;
            let x = invert_moment_map(&c, &Vector::from_vec(point), tol)?;
            let doc = PointDoc {
                point: x.as_slice().to_vec(),
            };
            render(&doc, opts.format, || point_csv("x", &doc.point))
        }
        Command::Demo { dir } => {
            let written = demo::write_demo(&dir, &tolerances(opts))?;
            format!("wrote {written} files to {}\n", dir.display())
        }
    };
    match &opts.output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn check_dim(point: &[f64], dim: usize) -> Result<()> {
    if point.len() != dim {
        anyhow::bail!(horoball::Error::InvalidInput(format!(
            "point has {} coordinates, expected {dim}",
            point.len()
        )));
    }
    Ok(())
}

fn verdict_csv(doc: &VerdictDoc) -> String {
    let mut out = csv_row(&[
        "face_id",
        "dim",
        "vertex_indices",
        "cond0",
        "cond1",
        "cond2",
        "cond3",
        "distance_last",
        "p_spread",
        "verdict",
    ]);
    for r in &doc.reports {
        out.push_str(&csv_row(&[
            r.face.id.to_string(),
            r.face.dim.to_string(),
            csv_indices(&r.face.vertex_indices),
            r.cond0_unbounded.to_string(),
            r.cond1_in_cone.to_string(),
            r.cond2_boundary_distance_growth.to_string(),
            r.cond3_p_limit.is_some().to_string(),
            format_real(r.distance_last),
            format_real(r.p_spread),
            doc.verdict.clone(),
        ]));
    }
    if doc.reports.is_empty() {
        out.push_str(&csv_row(&["", "", "", "", "", "", "", "", "", doc.verdict.as_str()]));
    }
    out
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<horoball::Error>() {
        Some(e) if e.is_numerical() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
