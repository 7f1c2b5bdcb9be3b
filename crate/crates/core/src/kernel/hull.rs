use super::{dot, norm};
use crate::config::{Config, BORDERLINE_FACTOR};
use crate::error::{Error, Result};

/// Whether the origin lies in the convex hull of a finite point set, with
/// a certificate either way.
#[derive(Debug, Clone, PartialEq)]
pub struct HullDecision {
    pub contains_zero: bool,
    /// Convex weights `t` with `||sum t_i r_i|| <= tau_hull`.
    pub weights: Option<Vec<f64>>,
    /// Unit vector `y` with `min_i <y, r_i> > 0`.
    pub witness: Option<Vec<f64>>,
    /// Norm of the final hull point `sum t_i r_i`.
    pub distance: f64,
    pub iterations: usize,
    /// The decision sits within a factor of ten of `tau_hull`.
    pub borderline: bool,
}

impl HullDecision {
    /// Re-evaluates whichever certificate is present.
    pub fn validate(&self, points: &[Vec<f64>], tau_hull: f64) -> bool {
        match (&self.weights, &self.witness) {
            (Some(t), None) => {
                let sum: f64 = t.iter().sum();
                let p = combine(points, t);
                t.iter().all(|&w| w >= 0.0) && (sum - 1.0).abs() <= 1e-12 && norm(&p) <= tau_hull
            }
            (None, Some(y)) => points.iter().all(|r| dot(y, r) > 0.0),
            _ => false,
        }
    }
}

fn combine(points: &[Vec<f64>], t: &[f64]) -> Vec<f64> {
    let dim = points.first().map_or(0, Vec::len);
    let mut p = vec![0.0; dim];
    for (r, &w) in points.iter().zip(t) {
        if w != 0.0 {
            for (pj, rj) in p.iter_mut().zip(r) {
                *pj += w * rj;
            }
        }
    }
    p
}

/// Decides `0 in conv{r_i}` by computing the hull point nearest the origin.
///
/// Runs conditional gradient with away steps and exact line search over
/// the simplex of weights. The iteration stops as soon as either
/// certificate is available: the current point `p` satisfies
/// `<p, r_i> > 0` for all `i` (then `p / ||p||` separates), or
/// `||p|| <= tau_hull / 10`.
pub fn hull_membership(points: &[Vec<f64>], cfg: &Config) -> Result<HullDecision> {
    check_points(points)?;
    let tau = cfg.tau_hull;
    let mut state = Iterate::new(points);
    let stop = state.run(
        cfg.max_hull_iterations,
        StopRule {
            norm: tau / BORDERLINE_FACTOR,
            on_separation: true,
            gap: 0.0,
        },
    );
    let Iterate { t, iterations, .. } = state;
    match stop {
        Stop::Small => return Ok(contains(points, t, tau, iterations)),
        Stop::Separated => {
            let p = combine(points, &t);
            if let Some(decision) = separated(points, &p, iterations, tau) {
                return Ok(decision);
            }
        }
        Stop::Converged | Stop::Exhausted => {}
    }

    // Stalled or out of iterations: settle with whatever certificate holds.
    let p = combine(points, &t);
    if let Some(decision) = separated(points, &p, iterations, tau) {
        return Ok(decision);
    }
    if norm(&p) <= tau {
        let mut decision = contains(points, t, tau, iterations);
        decision.borderline = true;
        return Ok(decision);
    }
    let min_grad = points.iter().map(|r| dot(&p, r)).fold(f64::INFINITY, f64::min);
    Err(Error::IterationLimit {
        iterations,
        gap: dot(&p, &p) - min_grad,
    })
}

/// Point of `conv{r_i}` nearest the origin, with its convex weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MinNormPoint {
    pub point: Vec<f64>,
    pub weights: Vec<f64>,
    /// Final Frank-Wolfe duality gap `||p||^2 - min_i <p, r_i>`.
    pub gap: f64,
    pub iterations: usize,
}

/// Runs the hull iteration to optimality: until the duality gap is at most
/// `gap_tol`, the point reaches the origin, or `max_iterations` pass.
pub fn min_norm_point(points: &[Vec<f64>], gap_tol: f64, max_iterations: usize) -> Result<MinNormPoint> {
    check_points(points)?;
    let mut state = Iterate::new(points);
    state.run(
        max_iterations,
        StopRule {
            norm: 0.0,
            on_separation: false,
            gap: gap_tol,
        },
    );
    let point = combine(points, &state.t);
    let min_grad = points.iter().map(|r| dot(&point, r)).fold(f64::INFINITY, f64::min);
    Ok(MinNormPoint {
        gap: dot(&point, &point) - min_grad,
        point,
        weights: state.t,
        iterations: state.iterations,
    })
}

fn check_points(points: &[Vec<f64>]) -> Result<()> {
    let Some(first) = points.first() else {
        return Err(Error::LengthMismatch {
            expected: 1,
            found: 0,
        });
    };
    let dim = first.len();
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    Ok(())
}

struct StopRule {
    /// Stop once `||p||` is at most this.
    norm: f64,
    /// Stop once every `<p, r_i>` is positive.
    on_separation: bool,
    /// Stop once the duality gap is at most this.
    gap: f64,
}

enum Stop {
    Small,
    Separated,
    Converged,
    Exhausted,
}

struct Iterate<'a> {
    points: &'a [Vec<f64>],
    t: Vec<f64>,
    p: Vec<f64>,
    grad: Vec<f64>,
    iterations: usize,
}

impl<'a> Iterate<'a> {
    /// Starts at the vertex of smallest norm.
    fn new(points: &'a [Vec<f64>]) -> Self {
        let k = points.len();
        let start = (0..k)
            .min_by(|&i, &j| norm(&points[i]).total_cmp(&norm(&points[j])).then(i.cmp(&j)))
            .unwrap_or(0);
        let mut t = vec![0.0; k];
        t[start] = 1.0;
        Self {
            points,
            t,
            p: points[start].clone(),
            grad: vec![0.0; k],
            iterations: 0,
        }
    }

    fn run(&mut self, max_iterations: usize, rule: StopRule) -> Stop {
        let points = self.points;
        let k = points.len();
        while self.iterations < max_iterations {
            if self.iterations % 64 == 0 {
                self.p = combine(points, &self.t);
            }
            let p_norm2 = dot(&self.p, &self.p);
            if p_norm2.sqrt() <= rule.norm || p_norm2 == 0.0 {
                return Stop::Small;
            }
            for (g, r) in self.grad.iter_mut().zip(points) {
                *g = dot(&self.p, r);
            }
            let s = argmin(&self.grad);
            if rule.on_separation && self.grad[s] > 0.0 {
                return Stop::Separated;
            }
            let fw_gap = p_norm2 - self.grad[s];
            if fw_gap <= rule.gap {
                return Stop::Converged;
            }
            let t = &self.t;
            let grad = &self.grad;
            let a = (0..k)
                .filter(|&i| t[i] > 0.0)
                .fold(None, |best: Option<usize>, i| match best {
                    Some(b) if grad[b] >= grad[i] => Some(b),
                    _ => Some(i),
                })
                .unwrap_or(s);
            let away_gap = grad[a] - p_norm2;

            let toward = fw_gap >= away_gap;
            let (dir, gamma_max): (Vec<f64>, f64) = if toward {
                (points[s].iter().zip(&self.p).map(|(r, q)| r - q).collect(), 1.0)
            } else {
                let ta = t[a];
                (self.p.iter().zip(&points[a]).map(|(q, r)| q - r).collect(), ta / (1.0 - ta))
            };
            let dd = dot(&dir, &dir);
            let gamma = if dd > 0.0 {
                (-dot(&self.p, &dir) / dd).clamp(0.0, gamma_max)
            } else {
                0.0
            };
            self.iterations += 1;
            if gamma <= 0.0 {
                return Stop::Converged;
            }
            if toward {
                if gamma >= 1.0 {
                    self.t.iter_mut().for_each(|w| *w = 0.0);
                    self.t[s] = 1.0;
                } else {
                    self.t.iter_mut().for_each(|w| *w *= 1.0 - gamma);
                    self.t[s] += gamma;
                }
            } else {
                self.t.iter_mut().for_each(|w| *w *= 1.0 + gamma);
                self.t[a] = if gamma >= gamma_max {
                    0.0
                } else {
                    (self.t[a] - gamma).max(0.0)
                };
            }
            for (q, d) in self.p.iter_mut().zip(&dir) {
                *q += gamma * d;
            }
        }
        Stop::Exhausted
    }
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

fn contains(points: &[Vec<f64>], mut t: Vec<f64>, tau: f64, iterations: usize) -> HullDecision {
    t.iter_mut().for_each(|w| *w = w.max(0.0));
    let sum: f64 = t.iter().sum();
    t.iter_mut().for_each(|w| *w /= sum);
    let distance = norm(&combine(points, &t));
    HullDecision {
        contains_zero: true,
        weights: Some(t),
        witness: None,
        distance,
        iterations,
        borderline: distance > tau / BORDERLINE_FACTOR,
    }
}

fn separated(points: &[Vec<f64>], p: &[f64], iterations: usize, tau: f64) -> Option<HullDecision> {
    let distance = norm(p);
    let y: Vec<f64> = p.iter().map(|x| x / distance).collect();
    if !points.iter().all(|r| dot(&y, r) > 0.0) {
        return None;
    }
    Some(HullDecision {
        contains_zero: false,
        weights: None,
        witness: Some(y),
        distance,
        iterations,
        borderline: distance <= tau * BORDERLINE_FACTOR,
    })
}
