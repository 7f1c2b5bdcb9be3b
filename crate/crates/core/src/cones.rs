//! The cone-intersection necessary condition for scalability.
//!
//! For a unit-norm frame in `R^n`, `cone(f_i) = {g : |<g, f_i>| >= 1/sqrt n}`.
//! If some unit `f` lies in every cone and in the interior of at least one,
//! no strictly positive scaling exists. In `R^2` the converse holds too and
//! the question is decided exactly; in higher dimensions this module only
//! searches for such an `f`.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::diagram::real_diagram_vector;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::kernel::{dot, min_norm_point, norm, sym_eigen};

/// Margins at or above this are treated as meeting a cone.
pub const SLACK: f64 = 1e-12;
/// A margin above this counts as strictly inside a cone.
pub const STRICT: f64 = 1e-9;
/// Strictness required of `<g, f~_i>` in the planar test; a diagram-level
/// gap `x` becomes a margin of roughly `x / (2 sqrt 2)`.
const DIAGRAM_STRICT: f64 = 1e-8;

/// Outcome of a search for a unit vector violating the necessary condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    /// A certified violating vector was found.
    pub found: bool,
    /// The certified vector, when `found`.
    pub f: Option<Vec<f64>>,
    /// `|<g, f_i>| - 1/sqrt n` for the reported vector: `f` when found,
    /// otherwise the best candidate examined (empty if there was none).
    pub margins: Vec<f64>,
    /// A unit vector meeting every cone with equality only.
    pub boundary_contact: Option<Vec<f64>>,
}

impl ViolationReport {
    fn none() -> Self {
        Self {
            found: false,
            f: None,
            margins: Vec::new(),
            boundary_contact: None,
        }
    }
}

/// `|<g, f_i>| - 1/sqrt n` for every frame vector.
pub fn cone_margins(frame: &Frame, g: &[f64]) -> Vec<f64> {
    let threshold = 1.0 / (frame.n() as f64).sqrt();
    (0..frame.k())
        .map(|i| dot(&frame.real_vector(i), g).abs() - threshold)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Contact {
    Outside,
    Boundary,
    Violation,
}

fn classify(margins: &[f64]) -> Contact {
    if margins.iter().any(|&m| m < -SLACK) {
        Contact::Outside
    } else if margins.iter().any(|&m| m > STRICT) {
        Contact::Violation
    } else {
        Contact::Boundary
    }
}

fn check_real_unit(frame: &Frame) -> Result<()> {
    frame.require_real()?;
    frame.require_unit_norm()
}

/// Exact test in `R^2`.
///
/// A violating `f` exists iff some unit `g` has `<g, f~_i> >= 0` for all `i`
/// and `> 0` for one. The feasible `g` form an arc whose endpoints are among
/// the `+-J f~_j`, so it suffices to examine those, the `f~_j` themselves
/// and midpoints of feasible pairs. A feasible `g` at angle `phi` comes from
/// `f` at angle `phi / 2`.
pub fn cone_violation_r2(frame: &Frame) -> Result<ViolationReport> {
    check_real_unit(frame)?;
    if frame.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: frame.n(),
        });
    }
    let diagrams: Vec<[f64; 2]> = (0..frame.k())
        .map(|i| {
            let d = real_diagram_vector(&frame.real_vector(i)).expect("n = 2");
            let d = d.as_real().expect("real field");
            [d[0], d[1]]
        })
        .collect();
    let values = |g: &[f64; 2]| -> Vec<f64> {
        diagrams.iter().map(|d| d[0] * g[0] + d[1] * g[1]).collect()
    };

    let mut candidates: Vec<[f64; 2]> = Vec::new();
    for (a, d) in diagrams.iter().enumerate() {
        candidates.extend([[-d[1], d[0]], [d[1], -d[0]], *d]);
        // equal-value points of two constraints
        for e in &diagrams[a + 1..] {
            let s = [d[0] + e[0], d[1] + e[1]];
            let len = s[0].hypot(s[1]);
            if len > 1e-6 {
                candidates.extend([[s[0] / len, s[1] / len], [-s[0] / len, -s[1] / len]]);
            }
        }
    }
    let mut feasible: Vec<[f64; 2]> = candidates
        .into_iter()
        .filter(|g| values(g).iter().all(|&v| v >= -SLACK))
        .collect();
    let endpoints = feasible.len();
    for a in 0..endpoints {
        for b in (a + 1)..endpoints {
            let s = [feasible[a][0] + feasible[b][0], feasible[a][1] + feasible[b][1]];
            let len = s[0].hypot(s[1]);
            if len > 1e-6 {
                let g = [s[0] / len, s[1] / len];
                if values(&g).iter().all(|&v| v >= -SLACK) {
                    feasible.push(g);
                }
            }
        }
    }

    // Prefer the most central strict direction, else the most strict one.
    let score = |g: &[f64; 2]| -> (u8, f64) {
        let v = values(g);
        let low = v.iter().copied().fold(f64::INFINITY, f64::min);
        if low > DIAGRAM_STRICT {
            (2, low)
        } else {
            (1, v.into_iter().fold(f64::NEG_INFINITY, f64::max))
        }
    };
    let mut report = ViolationReport::none();
    let mut best: Option<((u8, f64), usize)> = None;
    for (idx, g) in feasible.iter().enumerate() {
        let sc = score(g);
        if best.is_none_or(|(b, _)| sc > b) {
            best = Some((sc, idx));
        }
    }
    let Some(((_, top), idx)) = best else {
        return Ok(report);
    };
    let g = feasible[idx];
    let phi = g[1].atan2(g[0]) / 2.0;
    let f = vec![phi.cos(), phi.sin()];
    let margins = cone_margins(frame, &f);
    match classify(&margins) {
        Contact::Violation if top > DIAGRAM_STRICT => {
            report.found = true;
            report.f = Some(f);
        }
        Contact::Violation | Contact::Boundary => report.boundary_contact = Some(f),
        Contact::Outside => {}
    }
    report.margins = margins;
    Ok(report)
}

/// Budget and seed for [`cone_violation_search`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub seed: u64,
    pub restarts: usize,
    /// Ascent steps per restart.
    pub iterations: usize,
    /// Ascent step length.
    pub step: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 64,
            iterations: 200,
            step: 0.05,
        }
    }
}

struct Candidate {
    f: Vec<f64>,
    margins: Vec<f64>,
    contact: Contact,
    worst: f64,
}

impl Candidate {
    fn new(frame: &Frame, f: Vec<f64>) -> Self {
        let margins = cone_margins(frame, &f);
        let worst = margins.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            contact: classify(&margins),
            f,
            margins,
            worst,
        }
    }

    fn beats(&self, other: &Candidate) -> bool {
        (self.contact, self.worst) > (other.contact, other.worst)
    }
}

/// Heuristic search for a violating unit vector in `R^n`.
///
/// Each restart draws a random start, runs fixed-step normalized ascent on
/// `min_i s_i <f, f_i>` with the signs `s_i` of the start, and then solves
/// the sign-fixed problem exactly: the best `f` for those signs is the
/// normalized point of `conv{s_i f_i}` nearest the origin. Candidates are
/// also snapped onto the cone boundaries of their near-active constraints.
///
/// `found = false` means only that no violation was found. Restart `r` uses
/// its own random stream, so results do not depend on execution order; the
/// best candidate wins by contact type, then worst margin, then lowest
/// restart index.
pub fn cone_violation_search(frame: &Frame, options: &SearchOptions) -> Result<ViolationReport> {
    check_real_unit(frame)?;
    let n = frame.n();
    let vectors: Vec<Vec<f64>> = (0..frame.k()).map(|i| frame.real_vector(i)).collect();
    let threshold = 1.0 / (n as f64).sqrt();
    let cfg = Config::default();

    let mut best: Option<Candidate> = None;
    for restart in 0..options.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        rng.set_stream(restart as u64);
        let mut f: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        normalize(&mut f);
        let signs: Vec<f64> = vectors
            .iter()
            .map(|v| if dot(&f, v) >= 0.0 { 1.0 } else { -1.0 })
            .collect();

        for _ in 0..options.iterations {
            let (worst, _) = vectors
                .iter()
                .zip(&signs)
                .enumerate()
                .map(|(i, (v, s))| (i, s * dot(&f, v)))
                .fold((0, f64::INFINITY), |acc, (i, m)| if m < acc.1 { (i, m) } else { acc });
            for (x, v) in f.iter_mut().zip(&vectors[worst]) {
                *x += options.step * signs[worst] * v;
            }
            normalize(&mut f);
        }

        let mut candidates = vec![Candidate::new(frame, f.clone())];
        let signed: Vec<Vec<f64>> = vectors
            .iter()
            .zip(&signs)
            .map(|(v, s)| v.iter().map(|x| x * s).collect())
            .collect();
        if let Ok(m) = min_norm_point(&signed, 1e-15, 20_000) {
            let len = norm(&m.point);
            if len > 0.0 {
                let exact: Vec<f64> = m.point.iter().map(|x| x / len).collect();
                candidates.push(Candidate::new(frame, exact));
            }
        }
        let seeds: Vec<Vec<f64>> = candidates.iter().map(|c| c.f.clone()).collect();
        for seed in seeds {
            for width in [1e-9, 1e-6, 1e-3] {
                if let Some(snapped) = snap(&signed, &seed, threshold, width, &cfg) {
                    candidates.push(Candidate::new(frame, snapped));
                }
            }
        }
        for c in candidates {
            if best.as_ref().is_none_or(|b| c.beats(b)) {
                best = Some(c);
            }
        }
    }

    let mut report = ViolationReport::none();
    if let Some(c) = best {
        match c.contact {
            Contact::Violation => {
                report.found = true;
                report.f = Some(c.f);
            }
            Contact::Boundary => report.boundary_contact = Some(c.f),
            Contact::Outside => {}
        }
        report.margins = c.margins;
    }
    Ok(report)
}

fn normalize(f: &mut [f64]) {
    let len = norm(f);
    f.iter_mut().for_each(|x| *x /= len);
}

/// Minimum-norm `x` with `<x, a_i> = threshold` on the constraints within
/// `width` of the smallest, scaled to unit length when that only raises the
/// active values.
fn snap(signed: &[Vec<f64>], f: &[f64], threshold: f64, width: f64, cfg: &Config) -> Option<Vec<f64>> {
    let values: Vec<f64> = signed.iter().map(|a| dot(f, a)).collect();
    let lowest = values.iter().copied().fold(f64::INFINITY, f64::min);
    let active: Vec<&Vec<f64>> = signed
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v <= lowest + width)
        .map(|(a, _)| a)
        .collect();
    let m = active.len();
    let gram = DMatrix::from_fn(m, m, |i, j| dot(active[i], active[j]));
    let eig = sym_eigen(&gram, cfg).ok()?;
    let cutoff = 1e-12 * eig.max_abs().max(1.0);
    // x = A^T (A A^T)^+ b with b = threshold * 1
    let mut coeffs = vec![0.0; m];
    for (j, &lambda) in eig.values.iter().enumerate() {
        if lambda > cutoff {
            let v = eig.vectors.column(j);
            let proj: f64 = v.iter().sum::<f64>() * threshold / lambda;
            for (c, vi) in coeffs.iter_mut().zip(v.iter()) {
                *c += proj * vi;
            }
        }
    }
    let dim = f.len();
    let mut x = vec![0.0; dim];
    for (a, c) in active.iter().zip(&coeffs) {
        for (xi, ai) in x.iter_mut().zip(a.iter()) {
            *xi += c * ai;
        }
    }
    let consistent = active.iter().all(|a| (dot(&x, a) - threshold).abs() <= 1e-10);
    let len = norm(&x);
    if !consistent || len == 0.0 || len > 1.0 + 1e-12 {
        return None;
    }
    Some(x.into_iter().map(|v| v / len).collect())
}

/// Grid points of the unit circle or sphere inside `cone(f_i)` for every
/// index in a subset.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSamples {
    pub n: usize,
    /// Zero-based frame indices.
    pub subset: Vec<usize>,
    /// Angular spacing of the grid.
    pub spacing: f64,
    pub points: Vec<Vec<f64>>,
}

impl ConeSamples {
    /// Plain-text export: a header `# n=<n> subset=<indices>` with one-based
    /// comma-separated indices, then one point per row.
    pub fn to_text(&self) -> String {
        let subset: Vec<String> = self.subset.iter().map(|i| (i + 1).to_string()).collect();
        let mut out = format!("# n={} subset={}\n", self.n, subset.join(","));
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Samples `S^{n-1}` (n = 2 or 3) on a grid with angular spacing
/// `pi / resolution` and keeps the points within that spacing of every cone
/// in `subset`. The slack keeps isolated intersection points visible as
/// small clusters.
pub fn export_cone_samples(frame: &Frame, subset: &[usize], resolution: usize) -> Result<ConeSamples> {
    frame.require_real()?;
    let n = frame.n();
    if n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= frame.k()) {
        return Err(Error::LengthMismatch {
            expected: frame.k(),
            found: bad + 1,
        });
    }
    let resolution = resolution.max(1);
    let spacing = std::f64::consts::PI / resolution as f64;
    let threshold = 1.0 / (n as f64).sqrt() - spacing;
    let members: Vec<Vec<f64>> = subset.iter().map(|&i| frame.real_vector(i)).collect();
    let keep = |g: &[f64]| members.iter().all(|v| dot(g, v).abs() >= threshold);

    let mut points = Vec::new();
    if n == 2 {
        for m in 0..2 * resolution {
            let a = m as f64 * spacing;
            let g = vec![a.cos(), a.sin()];
            if keep(&g) {
                points.push(g);
            }
        }
    } else {
        for band in 0..=resolution {
            let theta = band as f64 * spacing;
            let ring = ((2.0 * resolution as f64 * theta.sin()).round() as usize).max(1);
            for m in 0..ring {
                let phi = 2.0 * std::f64::consts::PI * m as f64 / ring as f64;
                let g = vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
                if keep(&g) {
                    points.push(g);
                }
            }
        }
    }
    Ok(ConeSamples {
        n,
        subset: subset.to_vec(),
        spacing,
        points,
    })
}

/// The frame `{(u,v,v), (v,u,v), (v,v,u), (e_1+e_2)/sqrt 2, (e_1-e_2)/sqrt 2}`
/// with `u = sqrt(1 - 2v^2)`, for `0 < v < 1/sqrt 2`. It has no cone
/// violation for small `v` and is still not scalable.
pub fn perturbed_frame(v: f64) -> Result<Frame> {
    if !(v > 0.0 && v < 0.5f64.sqrt()) {
        return Err(Error::OutOfRange {
            name: "v",
            value: v,
            range: "(0, 1/sqrt 2)",
        });
    }
    let u = (1.0 - 2.0 * v * v).sqrt();
    let h = 0.5f64.sqrt();
    Frame::from_real(vec![
        vec![u, v, v],
        vec![v, u, v],
        vec![v, v, u],
        vec![h, h, 0.0],
        vec![h, -h, 0.0],
    ])?
    .into_unit_norm(Config::default().tau_unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use std::f64::consts::PI;

    #[test]
    fn orthogonal_pair_has_no_violation() {
        let r = cone_violation_r2(&samples::orthonormal_basis(2)).unwrap();
        assert!(!r.found);
        assert!(r.boundary_contact.is_some());
    }

    #[test]
    fn same_quadrant_pair_violates() {
        let r = cone_violation_r2(&samples::planar(&[0.0, PI / 4.0])).unwrap();
        assert!(r.found);
        let f = r.f.unwrap();
        // the bisector at pi/8 is the most central violating direction
        let angle = f[1].atan2(f[0]).rem_euclid(PI);
        assert!((angle - PI / 8.0).abs() < 1e-12, "{angle}");
        assert!(r.margins.iter().all(|&m| m >= -SLACK));
    }

    #[test]
    fn worked_example_has_no_violation() {
        assert!(!cone_violation_r2(&samples::worked_example()).unwrap().found);
    }

    #[test]
    fn planar_test_needs_planar_real_frames() {
        assert!(matches!(
            cone_violation_r2(&samples::orthonormal_basis(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let unflagged = Frame::from_real(vec![vec![1.0, 0.0]]).unwrap();
        assert_eq!(cone_violation_r2(&unflagged), Err(Error::NotUnitNorm));
    }

    #[test]
    fn standard_basis_touches_cones_with_equality_only() {
        let r = cone_violation_search(&samples::orthonormal_basis(3), &SearchOptions::default()).unwrap();
        assert!(!r.found);
        let g = r.boundary_contact.expect("the eight points (+-1,+-1,+-1)/sqrt 3");
        for x in g {
            assert!((x.abs() - 1.0 / 3f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn union_of_bases_has_no_violation() {
        let r = cone_violation_search(&samples::union_of_two_bases(), &SearchOptions::default()).unwrap();
        assert!(!r.found);
        assert!(r.margins.iter().any(|&m| m < -1e-3));
    }

    #[test]
    fn search_is_deterministic() {
        let f = samples::union_of_two_bases();
        let opts = SearchOptions {
            seed: 42,
            ..SearchOptions::default()
        };
        assert_eq!(
            cone_violation_search(&f, &opts).unwrap(),
            cone_violation_search(&f, &opts).unwrap()
        );
    }

    #[test]
    fn perturbed_frame_domain() {
        for v in [0.01, 0.1, 0.125, 0.3] {
            let f = perturbed_frame(v).unwrap();
            for i in 0..5 {
                let len: f64 = f.real_vector(i).iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((len - 1.0).abs() < 1e-12);
            }
        }
        assert!(matches!(perturbed_frame(0.71), Err(Error::OutOfRange { .. })));
        assert!(matches!(perturbed_frame(0.0), Err(Error::OutOfRange { .. })));
        assert!(perturbed_frame(0.7).is_ok());
        let limit = perturbed_frame(1e-6).unwrap();
        let base = samples::union_of_two_bases();
        for i in 0..5 {
            for (a, b) in limit.real_vector(i).iter().zip(base.real_vector(i)) {
                assert!((a - b).abs() <= 3e-6);
            }
        }
    }

    #[test]
    fn empty_subset_keeps_the_whole_grid() {
        let s = export_cone_samples(&samples::worked_example(), &[], 16).unwrap();
        assert_eq!(s.points.len(), 32);
        assert!(s.to_text().starts_with("# n=2 subset=\n"));
        assert!(matches!(
            export_cone_samples(&samples::orthonormal_basis(4), &[], 8),
            Err(Error::UnsupportedDimension(4))
        ));
    }
}
