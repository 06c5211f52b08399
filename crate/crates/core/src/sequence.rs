//! Deterministic descriptions of sequences `z_1, …, z_N` in `R^m`.
//!
//! The generator kinds produce `z_n = (n, f_1(n), …, f_k(n))`, one `f_i` per
//! parameter entry (scalars broadcast). `explicit` lists the samples and
//! `expr` gives one expression in `n` per coordinate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;

pub const DEFAULT_HORIZON: usize = 1000;

/// A scalar or a per-coordinate list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Scalar(f64),
    List(Vec<f64>),
}

impl Param {
    fn len(&self) -> usize {
        match self {
            Param::Scalar(_) => 1,
            Param::List(v) => v.len(),
        }
    }

    fn get(&self, i: usize) -> f64 {
        match self {
            Param::Scalar(v) => *v,
            Param::List(v) if v.len() == 1 => v[0],
            Param::List(v) => v[i],
        }
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Scalar(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum SequenceKind {
    /// `(n, a·n + c)`
    Affine { a: Param, c: Param },
    /// `(n, c·n^q)`
    Power { c: Param, q: Param },
    /// `(n, c·ln(a·n))`
    Log { c: Param, a: Param },
    /// `(n, a·sin(b·n) + c)`
    Sinusoid { a: Param, b: Param, c: Param },
    Explicit { samples: Vec<Vec<f64>> },
    /// One expression per coordinate in the variable `n`; `log` is the
    /// natural logarithm.
    Expr { coords: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    #[serde(flatten)]
    pub kind: SequenceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
}

impl SequenceSpec {
    pub fn new(kind: SequenceKind, horizon: usize) -> Self {
        Self {
            kind,
            horizon: Some(horizon),
        }
    }

    pub fn affine(a: f64, c: f64, horizon: usize) -> Self {
        Self::new(SequenceKind::Affine { a: a.into(), c: c.into() }, horizon)
    }

    pub fn power(c: f64, q: f64, horizon: usize) -> Self {
        Self::new(SequenceKind::Power { c: c.into(), q: q.into() }, horizon)
    }

    pub fn log(c: f64, a: f64, horizon: usize) -> Self {
        Self::new(SequenceKind::Log { c: c.into(), a: a.into() }, horizon)
    }

    pub fn sinusoid(a: f64, b: f64, c: f64, horizon: usize) -> Self {
        Self::new(
            SequenceKind::Sinusoid {
                a: a.into(),
                b: b.into(),
                c: c.into(),
            },
            horizon,
        )
    }

    pub fn explicit(samples: Vec<Vec<f64>>) -> Self {
        Self {
            kind: SequenceKind::Explicit { samples },
            horizon: None,
        }
    }

    /// Number of samples [`generate`](Self::generate) will produce.
    pub fn effective_horizon(&self) -> usize {
        match (&self.kind, self.horizon) {
            (SequenceKind::Explicit { samples }, None) => samples.len(),
            (_, Some(h)) => h,
            (_, None) => DEFAULT_HORIZON,
        }
    }

    /// Samples `z_1, …, z_N`.
    pub fn generate(&self) -> Result<Vec<Vector>> {
        let horizon = self.effective_horizon();
        if horizon == 0 {
            return Err(Error::InvalidInput("sequence horizon must be at least 1".into()));
        }
        let samples = match &self.kind {
            SequenceKind::Affine { a, c } => {
                generate_graph(horizon, &[a, c], |n, i| a.get(i) * n + c.get(i))?
            }
            SequenceKind::Power { c, q } => {
                generate_graph(horizon, &[c, q], |n, i| c.get(i) * n.powf(q.get(i)))?
            }
            SequenceKind::Log { c, a } => {
                generate_graph(horizon, &[c, a], |n, i| c.get(i) * (a.get(i) * n).ln())?
            }
            SequenceKind::Sinusoid { a, b, c } => generate_graph(horizon, &[a, b, c], |n, i| {
                a.get(i) * (b.get(i) * n).sin() + c.get(i)
            })?,
            SequenceKind::Explicit { samples } => explicit_samples(samples, horizon)?,
            SequenceKind::Expr { coords } => expression_samples(coords, horizon)?,
        };
        for (k, z) in samples.iter().enumerate() {
            if z.iter().any(|c| !c.is_finite()) {
                return Err(Error::EvalError(format!(
                    "sample {} is undefined: {:?}",
                    k + 1,
                    z.as_slice()
                )));
            }
        }
        Ok(samples)
    }
}

fn generate_graph(horizon: usize, params: &[&Param], f: impl Fn(f64, usize) -> f64) -> Result<Vec<Vector>> {
    let k = params.iter().map(|p| p.len()).max().unwrap_or(1);
    if k == 0 || params.iter().any(|p| p.len() != 1 && p.len() != k) {
        return Err(Error::InvalidInput(
            "generator parameters must be scalars or lists of one common length".into(),
        ));
    }
    Ok((1..=horizon)
        .map(|n| {
            let n = n as f64;
            let mut z = Vector::zeros(k + 1);
            z[0] = n;
            for i in 0..k {
                z[i + 1] = f(n, i);
            }
            z
        })
        .collect())
}

fn explicit_samples(samples: &[Vec<f64>], horizon: usize) -> Result<Vec<Vector>> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("explicit sequence has no samples".into()));
    }
    if horizon > samples.len() {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} exceeds the {} explicit samples",
            samples.len()
        )));
    }
    let dim = samples[0].len();
    if dim == 0 || samples.iter().any(|s| s.len() != dim) {
        return Err(Error::InvalidInput("explicit samples must share one nonzero length".into()));
    }
    Ok(samples[..horizon].iter().map(|s| Vector::from_column_slice(s)).collect())
}

fn expression_samples(coords: &[String], horizon: usize) -> Result<Vec<Vector>> {
    if coords.is_empty() {
        return Err(Error::InvalidInput("expression sequence has no coordinates".into()));
    }
    let funcs = coords
        .iter()
        .map(|src| {
            let expr: meval::Expr = src
                .parse()
                .map_err(|e| Error::EvalError(format!("cannot parse `{src}`: {e}")))?;
            let mut ctx = meval::Context::new();
            ctx.func("log", f64::ln);
            expr.bind_with_context(ctx, "n")
                .map_err(|e| Error::EvalError(format!("cannot bind `{src}`: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((1..=horizon)
        .map(|n| Vector::from_iterator(funcs.len(), funcs.iter().map(|f| f(n as f64))))
        .collect())
}
