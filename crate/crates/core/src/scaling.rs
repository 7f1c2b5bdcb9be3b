//! Deciding whether a unit-norm frame can be scaled to a tight frame.
//!
//! Nonnegative weights `w_i = c_i^2` make `{c_i f_i}` tight exactly when
//! `w` lies in the null space of the diagram Gramian. Writing that null
//! space as `w = B y`, strictly positive weights exist exactly when some
//! `y` has `<y, r_i> > 0` for every row `r_i` of `B`, i.e. when the origin
//! is outside `conv{r_i}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::diagram::diagram_gramian;
use crate::error::{Error, Result};
use crate::frame::{frame_operator, gramian, scale_frame, Frame};
use crate::kernel::{dot, hull_membership, null_space, perceptron_witness, NullSpaceData};

/// Weights below this are not treated as part of a hull certificate's support.
const SUPPORT_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// Strictly positive coefficients exist.
    StrictlyScalable,
    /// Only nonnegative coefficients with at least one zero exist.
    SubsetScalable,
    NotScalable,
    /// A rank or hull decision sat too close to its tolerance to call.
    Borderline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `<y, r_i> > 0` for every null-space row `r_i`.
    StrictWitness { y: Vec<f64>, min_margin: f64 },
    /// Convex weights with `sum t_i r_i = 0` up to `residual`, so no
    /// strictly positive scaling exists.
    HullWeights { weights: Vec<f64>, residual: f64 },
    /// The diagram Gramian has no null space at all.
    InvertibleGramian { min_eigenvalue: f64 },
    /// A unit vector meeting every `cone(f_i)`, one of them strictly.
    NecessaryConditionViolation { f: Vec<f64>, margins: Vec<f64> },
}

impl Certificate {
    /// Re-derives the null-space rows of `frame` and re-checks the
    /// certificate's inequalities.
    pub fn validate(&self, frame: &Frame, cfg: &Config) -> Result<bool> {
        match self {
            Certificate::InvertibleGramian { .. } => {
                let ns = null_space(&diagram_gramian(frame)?.matrix, cfg)?;
                Ok(ns.nullity() == 0 && ns.eigenvalues[0] > cfg.tau_null)
            }
            Certificate::StrictWitness { y, .. } => {
                let ns = null_space(&diagram_gramian(frame)?.matrix, cfg)?;
                Ok(ns.nullity() == y.len() && ns.rows.iter().all(|r| dot(y, r) > 0.0))
            }
            Certificate::HullWeights { weights, .. } => {
                let ns = null_space(&diagram_gramian(frame)?.matrix, cfg)?;
                if weights.len() != frame.k() || weights.iter().any(|&w| w < 0.0) {
                    return Ok(false);
                }
                let sum: f64 = weights.iter().sum();
                let mut p = vec![0.0; ns.nullity()];
                for (r, w) in ns.rows.iter().zip(weights) {
                    p.iter_mut().zip(r).for_each(|(x, y)| *x += w * y);
                }
                Ok((sum - 1.0).abs() <= 1e-12 && dot(&p, &p).sqrt() <= cfg.tau_hull)
            }
            Certificate::NecessaryConditionViolation { f, .. } => {
                let threshold = 1.0 / (frame.n() as f64).sqrt();
                if f.len() != frame.n() {
                    return Ok(false);
                }
                let margins: Vec<f64> = (0..frame.k())
                    .map(|i| {
                        let v = frame.vector(i);
                        let ip: Complex64 = v.iter().zip(f).map(|(a, b)| a.conj() * b).sum();
                        ip.norm() - threshold
                    })
                    .collect();
                Ok(margins.iter().all(|&m| m >= -1e-12) && margins.iter().any(|&m| m > 1e-9))
            }
        }
    }
}

/// Residuals of the three independent tightness checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `||G D G - lambda G||_F` with `D = diag(c_i^2)`.
    pub gramian_residual: f64,
    /// `||S_c - lambda I||_F` for the scaled frame operator `S_c`.
    pub frame_operator_residual: f64,
    /// `|sum c_i^2 - lambda n|`.
    pub trace_residual: f64,
    pub gramian_ok: bool,
    pub frame_operator_ok: bool,
    pub trace_ok: bool,
    pub pass: bool,
}

pub fn verify_scaling(frame: &Frame, coefficients: &[f64], lambda: f64, cfg: &Config) -> Result<VerificationReport> {
    frame.require_unit_norm()?;
    let scaled = scale_frame(frame, coefficients)?;
    let n = frame.n();
    let tau = cfg.tau_tight;

    let g = gramian(frame).matrix;
    let k = frame.k();
    let d = DMatrix::<Complex64>::from_fn(k, k, |i, j| {
        if i == j {
            Complex64::new(coefficients[i] * coefficients[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let gdg = &g * d * &g;
    let gramian_residual = (gdg - g.map(|z| z * lambda)).norm();

    let s = frame_operator(&scaled).matrix;
    let frame_operator_residual =
        (s - DMatrix::<Complex64>::identity(n, n).map(|z| z * lambda)).norm();

    let total: f64 = coefficients.iter().map(|c| c * c).sum();
    let trace_residual = (total - lambda * n as f64).abs();

    let gramian_ok = gramian_residual <= tau * lambda * g.norm();
    let frame_operator_ok = frame_operator_residual <= tau * lambda;
    let trace_ok = trace_residual <= tau * lambda * n as f64;
    Ok(VerificationReport {
        gramian_residual,
        frame_operator_residual,
        trace_residual,
        gramian_ok,
        frame_operator_ok,
        trace_ok,
        pass: gramian_ok && frame_operator_ok && trace_ok,
    })
}

/// `c_i = |d_i|`: any scalars making `{d_i f_i}` tight can be replaced by
/// their moduli.
pub fn normalize_scalars(scalars: &[Complex64]) -> Vec<f64> {
    scalars.iter().map(|d| d.norm()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Rank of the diagram Gramian.
    pub rank: usize,
    /// Dimension `l` of its null space.
    pub nullity: usize,
    pub min_eigenvalue: f64,
    pub rank_gap: f64,
    pub null_threshold: f64,
    /// Distance from the origin to `conv{r_i}` as computed.
    pub hull_distance: Option<f64>,
    pub hull_iterations: usize,
    pub perceptron_updates: Option<usize>,
    /// Indices forced to zero in a subset scaling.
    pub zero_indices: Vec<usize>,
    pub verification: Option<VerificationReport>,
    pub borderline_reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingResult {
    pub verdict: Verdict,
    /// Normalized so that `sum c_i^2 = n`.
    pub coefficients: Option<Vec<f64>>,
    /// `sum c_i^2 / n`, which is 1 after normalization.
    pub lambda: Option<f64>,
    pub certificate: Certificate,
    pub diagnostics: Diagnostics,
}

fn normalized(squares: &[f64], n: usize) -> (Vec<f64>, f64) {
    let total: f64 = squares.iter().sum();
    let factor = n as f64 / total;
    let coefficients: Vec<f64> = squares.iter().map(|w| (w * factor).max(0.0).sqrt()).collect();
    let lambda = coefficients.iter().map(|c| c * c).sum::<f64>() / n as f64;
    (coefficients, lambda)
}

fn null_data(frame: &Frame, cfg: &Config) -> Result<NullSpaceData> {
    null_space(&diagram_gramian(frame)?.matrix, cfg)
}

/// Full scalability decision with coefficients and certificate.
///
/// Steps: diagram Gramian, its null space (none means not scalable), the
/// rows `r_i`, then the hull test. A separating direction is polished by
/// the perceptron and mapped to coefficients `c_i = sqrt(<y, r_i>)`. When
/// the origin is in the hull, indices carrying hull weight are forced to
/// zero and the test repeats on the rest, which finds a nonnegative
/// scaling with the largest support if one exists.
pub fn decide_scaling(frame: &Frame, cfg: &Config) -> Result<ScalingResult> {
    let ns = null_data(frame, cfg)?;
    let n = frame.n();
    let mut diagnostics = Diagnostics {
        rank: ns.rank(),
        nullity: ns.nullity(),
        min_eigenvalue: ns.eigenvalues.first().copied().unwrap_or(0.0),
        rank_gap: ns.rank_gap,
        null_threshold: ns.threshold,
        hull_distance: None,
        hull_iterations: 0,
        perceptron_updates: None,
        zero_indices: Vec::new(),
        verification: None,
        borderline_reasons: Vec::new(),
    };
    if ns.borderline {
        diagnostics.borderline_reasons.push(format!(
            "a diagram Gramian eigenvalue lies within 10x of the null threshold {:e}",
            ns.threshold
        ));
    }
    if ns.nullity() == 0 {
        let certificate = Certificate::InvertibleGramian {
            min_eigenvalue: diagnostics.min_eigenvalue,
        };
        return Ok(finish(Verdict::NotScalable, None, certificate, diagnostics));
    }

    let hull = hull_membership(&ns.rows, cfg)?;
    diagnostics.hull_distance = Some(hull.distance);
    diagnostics.hull_iterations = hull.iterations;
    if hull.borderline {
        diagnostics.borderline_reasons.push(format!(
            "hull distance {:e} is within 10x of tau_hull",
            hull.distance
        ));
    }

    if let Some(y0) = hull.witness {
        let y = match perceptron_witness(&ns.rows, &y0, cfg.max_perceptron_updates) {
            Ok(out) => {
                diagnostics.perceptron_updates = Some(out.updates);
                out.y
            }
            Err(Error::IterationCap { updates }) => {
                diagnostics.perceptron_updates = Some(updates);
                diagnostics
                    .borderline_reasons
                    .push("perceptron hit its update cap".into());
                y0
            }
            Err(e) => return Err(e),
        };
        let squares: Vec<f64> = ns.rows.iter().map(|r| dot(&y, r)).collect();
        let min_margin = squares.iter().copied().fold(f64::INFINITY, f64::min);
        let (coefficients, lambda) = normalized(&squares, n);
        let report = verify_scaling(frame, &coefficients, lambda, cfg)?;
        if !report.pass {
            diagnostics
                .borderline_reasons
                .push("scaled frame fails tightness verification".into());
        }
        diagnostics.verification = Some(report);
        let certificate = Certificate::StrictWitness { y, min_margin };
        return Ok(finish(
            Verdict::StrictlyScalable,
            Some((coefficients, lambda)),
            certificate,
            diagnostics,
        ));
    }

    let weights = hull.weights.expect("hull decision carries weights when it contains zero");
    let certificate = Certificate::HullWeights {
        weights: weights.clone(),
        residual: hull.distance,
    };
    match reduced_support(&ns.rows, &weights, cfg, &mut diagnostics)? {
        Some(squares) => {
            let (coefficients, lambda) = normalized(&squares, n);
            let report = verify_scaling(frame, &coefficients, lambda, cfg)?;
            if !report.pass {
                diagnostics
                    .borderline_reasons
                    .push("subset scaling fails tightness verification".into());
            }
            diagnostics.verification = Some(report);
            Ok(finish(
                Verdict::SubsetScalable,
                Some((coefficients, lambda)),
                certificate,
                diagnostics,
            ))
        }
        None => Ok(finish(Verdict::NotScalable, None, certificate, diagnostics)),
    }
}

fn finish(
    verdict: Verdict,
    solution: Option<(Vec<f64>, f64)>,
    certificate: Certificate,
    diagnostics: Diagnostics,
) -> ScalingResult {
    let verdict = if diagnostics.borderline_reasons.is_empty() {
        verdict
    } else {
        Verdict::Borderline
    };
    let (coefficients, lambda) = match solution {
        Some((c, l)) => (Some(c), Some(l)),
        None => (None, None),
    };
    ScalingResult {
        verdict,
        coefficients,
        lambda,
        certificate,
        diagnostics,
    }
}

/// Searches for `y` with `<y, r_i> >= 0` for all `i`, strictly on as many
/// indices as possible. Every index in the support of a zero-containing
/// convex combination must get `<y, r_i> = 0`, so those are pinned and the
/// search continues inside the subspace orthogonal to them.
fn reduced_support(
    rows: &[Vec<f64>],
    first_weights: &[f64],
    cfg: &Config,
    diagnostics: &mut Diagnostics,
) -> Result<Option<Vec<f64>>> {
    let k = rows.len();
    let l = rows.first().map_or(0, Vec::len);
    let mut pinned: Vec<bool> = first_weights.iter().map(|&w| w > SUPPORT_FLOOR).collect();

    loop {
        let free: Vec<usize> = (0..k).filter(|&i| !pinned[i]).collect();
        if free.is_empty() {
            return Ok(None);
        }
        let mut m = DMatrix::<f64>::zeros(l, l);
        for (i, r) in rows.iter().enumerate() {
            if pinned[i] {
                for a in 0..l {
                    for b in 0..l {
                        m[(a, b)] += r[a] * r[b];
                    }
                }
            }
        }
        let sub = null_space(&m, cfg)?;
        let q = &sub.basis;
        if q.ncols() == 0 {
            return Ok(None);
        }
        let points: Vec<Vec<f64>> = free
            .iter()
            .map(|&i| (0..q.ncols()).map(|c| dot(q.column(c).as_slice(), &rows[i])).collect())
            .collect();
        let hull = hull_membership(&points, cfg)?;
        diagnostics.hull_iterations += hull.iterations;
        if hull.borderline || sub.borderline {
            diagnostics
                .borderline_reasons
                .push("reduced-support hull decision is borderline".into());
        }
        match (hull.witness, hull.weights) {
            (Some(z), _) => {
                let y: Vec<f64> = (0..l)
                    .map(|a| (0..q.ncols()).map(|c| q[(a, c)] * z[c]).sum())
                    .collect();
                diagnostics.zero_indices = (0..k).filter(|&i| pinned[i]).collect();
                let squares = (0..k)
                    .map(|i| if pinned[i] { 0.0 } else { dot(&y, &rows[i]) })
                    .collect();
                return Ok(Some(squares));
            }
            (None, Some(t)) => {
                for (&i, &w) in free.iter().zip(&t) {
                    if w > SUPPORT_FLOOR {
                        pinned[i] = true;
                    }
                }
            }
            (None, None) => unreachable!("hull decisions carry a certificate"),
        }
    }
}

/// The polyhedral cone of all valid weight vectors, in null-space
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRegion {
    /// `k x l` basis `B` of the diagram Gramian's null space.
    pub basis: DMatrix<f64>,
    /// Half-space normals: `H_i = {y : <y, r_i> >= 0}`.
    pub normals: Vec<Vec<f64>>,
    /// A point strictly inside every `H_i`, when one exists.
    pub interior_point: Option<Vec<f64>>,
}

impl SolutionRegion {
    pub fn dimension(&self) -> usize {
        self.basis.ncols()
    }

    /// `c_i = sqrt(<y, r_i>) = sqrt((B y)(i))`, or `None` if `y` lies outside
    /// the region.
    pub fn coefficients(&self, y: &[f64]) -> Option<Vec<f64>> {
        if y.len() != self.dimension() {
            return None;
        }
        let values: Vec<f64> = self.normals.iter().map(|r| dot(y, r)).collect();
        values
            .iter()
            .all(|&v| v >= 0.0)
            .then(|| values.iter().map(|v| v.sqrt()).collect())
    }

    pub fn is_interior(&self, y: &[f64]) -> bool {
        y.len() == self.dimension() && self.normals.iter().all(|r| dot(y, r) > 0.0)
    }
}

pub fn solution_region(frame: &Frame, cfg: &Config) -> Result<SolutionRegion> {
    let ns = null_data(frame, cfg)?;
    if ns.nullity() == 0 {
        return Err(Error::EmptyNullSpace);
    }
    let hull = hull_membership(&ns.rows, cfg)?;
    let interior_point = match hull.witness {
        Some(y0) => perceptron_witness(&ns.rows, &y0, cfg.max_perceptron_updates)
            .ok()
            .map(|out| out.y),
        None => None,
    };
    Ok(SolutionRegion {
        basis: ns.basis,
        normals: ns.rows,
        interior_point,
    })
}
