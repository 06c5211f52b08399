//! Finite-horizon classification of sequences `z_n` by their limit in the
//! horofunction compactification.
//!
//! For each proper face `F` of `B` the tail of the sequence is tested for:
//! (0) unboundedness, (i) `z_{n,F}` in the cone over `F`, (ii) growing
//! distance of `z_{n,F}` to the relative boundary of that cone, (iii) `z_n^F`
//! settling to a limit `p`. A face passing all four yields `h_{F°,p}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::horo::Horofunction;
use crate::linalg::Vector;
use crate::polytope::Face;
use crate::sequence::SequenceSpec;
use crate::space::NormedSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Tail window length `W`; the tail is samples `N−W ..= N`.
    pub window: usize,
    /// `M`: the tail must reach this norm to count as unbounded.
    pub unbounded_norm: f64,
    /// `D_min`: final distance to the relative cone boundary.
    pub min_boundary_distance: f64,
    /// Required increase of that distance across the window.
    pub min_boundary_growth: f64,
    /// `ε_p`: tail diameter allowed for `z_n^F`, also the slack on monotonicity.
    pub p_tol: f64,
    /// `ε_verify`: pointwise residual accepted when confirming a verdict.
    pub verify_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            window: 200,
            unbounded_norm: 100.0,
            min_boundary_distance: 5.0,
            min_boundary_growth: 0.1,
            p_tol: 1e-3,
            verify_tol: 1e-2,
        }
    }
}

/// Evidence for one face `F` of `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub face: Face,
    /// 1-based inclusive sample range of the tail window.
    pub window: (usize, usize),
    pub max_norm: f64,
    pub cond0_unbounded: bool,
    pub cond1_in_cone: bool,
    pub distance_first: f64,
    pub distance_last: f64,
    /// Smallest step `d_{n+1} − d_n` over the window.
    pub min_increment: f64,
    pub cond2_boundary_distance_growth: bool,
    /// Diameter of `{z_n^F}` over the window.
    pub p_spread: f64,
    /// Tail mean of `z_n^F`, present when the spread is within `ε_p`.
    pub cond3_p_limit: Option<Vector>,
}

impl ConditionReport {
    pub fn passes(&self) -> bool {
        self.cond0_unbounded
            && self.cond1_in_cone
            && self.cond2_boundary_distance_growth
            && self.cond3_p_limit.is_some()
    }

    fn summary(&self) -> String {
        let mark = |ok: bool| if ok { "ok" } else { "fail" };
        format!(
            "face {} (dim {}, vertices {:?}): unbounded {}, cone {}, boundary distance {} ({:.6} -> {:.6}), limit {} (spread {:.3e})",
            self.face.id(),
            self.face.dim(),
            self.face.vertex_indices(),
            mark(self.cond0_unbounded),
            mark(self.cond1_in_cone),
            mark(self.cond2_boundary_distance_growth),
            self.distance_first,
            self.distance_last,
            mark(self.cond3_p_limit.is_some()),
            self.p_spread,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Bounded,
    Horofunction(Horofunction),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationVerdict {
    pub verdict: Verdict,
    /// One report per proper face of `B`, ordered by face id. Empty when the
    /// sequence is bounded.
    pub reports: Vec<ConditionReport>,
    pub diagnostics: Vec<String>,
}

fn tail_range(len: usize, window: usize) -> std::ops::Range<usize> {
    let w = window.min(len.saturating_sub(1));
    len - 1 - w..len
}

fn check_samples(space: &NormedSpace, samples: &[Vector]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no samples".into()));
    }
    if let Some(i) = samples.iter().position(|z| z.len() != space.dim()) {
        return Err(Error::InvalidInput(format!(
            "sample {} has {} coordinates, expected {}",
            i + 1,
            samples[i].len(),
            space.dim()
        )));
    }
    Ok(())
}

/// Condition (0) on the tail: the norm reaches `M` and ends above where it
/// started.
fn tail_unbounded(space: &NormedSpace, tail: &[Vector], tol: &Tolerances) -> (bool, f64) {
    let norms: Vec<f64> = tail.iter().map(|z| space.norm(z)).collect();
    let max = norms.iter().cloned().fold(0.0, f64::max);
    let rising = norms.last() > norms.first();
    (max >= tol.unbounded_norm && rising, max)
}

impl NormedSpace {
    /// Evaluates the four conditions for the face `face` of `B` over the tail
    /// window of `samples`. Never fails; an empty sample list yields a report
    /// with every condition false.
    pub fn check_conditions(&self, face: &Face, samples: &[Vector], tol: &Tolerances) -> ConditionReport {
        if samples.is_empty() {
            return ConditionReport {
                face: face.clone(),
                window: (0, 0),
                max_norm: 0.0,
                cond0_unbounded: false,
                cond1_in_cone: false,
                distance_first: 0.0,
                distance_last: 0.0,
                min_increment: 0.0,
                cond2_boundary_distance_growth: false,
                p_spread: f64::INFINITY,
                cond3_p_limit: None,
            };
        }
        let range = tail_range(samples.len(), tol.window);
        let window = (range.start + 1, range.end);
        let tail = &samples[range];
        let (cond0_unbounded, max_norm) = tail_unbounded(self, tail, tol);

        let basis = face.span_basis();
        let mut in_cone = true;
        let mut distances = Vec::with_capacity(tail.len());
        let mut perps = Vec::with_capacity(tail.len());
        for z in tail {
            let along = &basis * (basis.transpose() * z);
            let query = self.ball().cone_query(face, &along);
            in_cone &= query.inside;
            distances.push(query.rel_boundary_distance);
            perps.push(z - along);
        }

        let min_increment = distances
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let distance_first = distances[0];
        let distance_last = *distances.last().unwrap();
        let monotone = distances.len() < 2 || min_increment >= -tol.p_tol;
        let cond2 = monotone
            && distance_last - distance_first >= tol.min_boundary_growth
            && distance_last >= tol.min_boundary_distance;

        let mut p_spread = 0.0_f64;
        for i in 0..perps.len() {
            for j in i + 1..perps.len() {
                p_spread = p_spread.max((&perps[i] - &perps[j]).norm());
            }
        }
        let cond3_p_limit = (p_spread <= tol.p_tol).then(|| {
            let mean = perps.iter().fold(Vector::zeros(self.dim()), |acc, v| acc + v) / perps.len() as f64;
            face.project_split(&mean).1
        });

        ConditionReport {
            face: face.clone(),
            window,
            max_norm,
            cond0_unbounded,
            cond1_in_cone: in_cone,
            distance_first,
            distance_last,
            min_increment,
            cond2_boundary_distance_growth: cond2,
            p_spread,
            cond3_p_limit,
        }
    }

    /// Generates the samples of `spec` and classifies them.
    pub fn classify(&self, spec: &SequenceSpec, tol: &Tolerances) -> Result<ClassificationVerdict> {
        let samples = spec.generate()?;
        self.classify_samples(&samples, tol)
    }

    pub fn classify_samples(&self, samples: &[Vector], tol: &Tolerances) -> Result<ClassificationVerdict> {
        check_samples(self, samples)?;
        let range = tail_range(samples.len(), tol.window);
        let mut diagnostics = vec![format!(
            "{} samples, tail window {}..={}",
            samples.len(),
            range.start + 1,
            range.end
        )];
        let (unbounded, max_norm) = tail_unbounded(self, &samples[range], tol);
        if !unbounded {
            diagnostics.push(format!(
                "tail norm peaks at {max_norm:.6} (threshold {}) or is not rising: bounded",
                tol.unbounded_norm
            ));
            return Ok(ClassificationVerdict {
                verdict: Verdict::Bounded,
                reports: Vec::new(),
                diagnostics,
            });
        }

        let reports: Vec<ConditionReport> = self
            .ball()
            .faces()
            .iter()
            .map(|f| self.check_conditions(f, samples, tol))
            .collect();
        diagnostics.extend(reports.iter().map(ConditionReport::summary));

        let passing: Vec<&ConditionReport> = reports.iter().filter(|r| r.passes()).collect();
        let chosen = passing.iter().min_by(|a, b| {
            (a.face.dim(), a.p_spread, a.face.id())
                .partial_cmp(&(b.face.dim(), b.p_spread, b.face.id()))
                .unwrap()
        });
        let verdict = match chosen {
            None => {
                diagnostics.push("no face passes all conditions: inconclusive".into());
                Verdict::Inconclusive
            }
            Some(r) => {
                if passing.len() > 1 {
                    let ids: Vec<usize> = passing.iter().map(|r| r.face.id()).collect();
                    diagnostics.push(format!(
                        "faces {ids:?} pass; chose face {} (smallest dimension, then spread)",
                        r.face.id()
                    ));
                }
                let dual_face = self.dual_of_ball_face(&r.face)?;
                let p = r.cond3_p_limit.as_ref().unwrap();
                Verdict::Horofunction(self.horofunction(&dual_face, p)?)
            }
        };
        Ok(ClassificationVerdict {
            verdict,
            reports,
            diagnostics,
        })
    }

    /// `r_n = max over the grid of |ψ_{z_n}(y) − h(y)|`, one value per sample.
    pub fn verify_pointwise(&self, samples: &[Vector], h: &Horofunction, grid: &[Vector]) -> Result<Vec<f64>> {
        if grid.is_empty() {
            return Err(Error::InvalidInput("verification grid is empty".into()));
        }
        check_samples(self, samples)?;
        if grid.iter().any(|y| y.len() != self.dim()) {
            return Err(Error::InvalidInput("grid point dimension mismatch".into()));
        }
        let target: Vec<f64> = grid.iter().map(|y| h.value(y)).collect();
        Ok(samples
            .iter()
            .map(|z| {
                grid.iter()
                    .zip(&target)
                    .map(|(y, t)| (self.psi_value(z, y) - t).abs())
                    .fold(0.0, f64::max)
            })
            .collect())
    }
}

/// 25 fixed points in `[−2, 2]^m`: the 5×5 integer lattice for `m = 2`, a
/// Halton sequence otherwise.
pub fn default_grid(m: usize) -> Vec<Vector> {
    if m == 2 {
        let ticks = [-2.0, -1.0, 0.0, 1.0, 2.0];
        return ticks
            .iter()
            .flat_map(|&a| ticks.iter().map(move |&b| Vector::from_column_slice(&[a, b])))
            .collect();
    }
    let bases = first_primes(m);
    (1..=25)
        .map(|i| Vector::from_iterator(m, bases.iter().map(|&b| 4.0 * radical_inverse(i, b) - 2.0)))
        .collect()
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut n = 2;
    while primes.len() < count {
        if primes.iter().all(|p| n % p != 0) {
            primes.push(n);
        }
        n += 1;
    }
    primes
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}
