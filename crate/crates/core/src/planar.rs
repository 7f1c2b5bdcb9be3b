//! Constructive scaling in `R^2`.
//!
//! A planar unit-norm frame is strictly scalable exactly when it has
//! property (Q): no unit `f` meets every `cone(f_i)` with one strict
//! inequality. Under (Q) every vector belongs to an orthogonal pair or to
//! a triple whose diagram vectors positively span zero, and summing the
//! local solutions gives global coefficients.

use serde::{Deserialize, Serialize};

use crate::cones::cone_violation_r2;
use crate::diagram::real_diagram_vector;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::kernel::dot;

/// Pairs with `|<f_a, f_b>|` at most this count as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
const SIGN_TOL: f64 = 1e-12;
const TRIPLE_RESIDUAL: f64 = 1e-10;
const ACCUMULATION_TOL: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-8;

/// Rotation by `pi/2` counter-clockwise.
pub fn rotate_j(g: [f64; 2]) -> [f64; 2] {
    [-g[1], g[0]]
}

/// Whether the planar frame has property (Q).
pub fn property_q(frame: &Frame) -> Result<bool> {
    Ok(!cone_violation_r2(frame)?.found)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TripleSolution {
    /// Coefficients `c` with `sum c_i^2 f~_i = 0`.
    Feasible([f64; 3]),
    Infeasible,
}

fn diagram2(f: [f64; 2]) -> [f64; 2] {
    let d = real_diagram_vector(&f).expect("planar vector");
    let d = d.as_real().expect("real field");
    [d[0], d[1]]
}

/// Positive coefficients balancing the diagram vectors of three unit
/// vectors in `R^2`, if any exist.
pub fn solve_triple(f1: [f64; 2], f2: [f64; 2], f3: [f64; 2]) -> Result<TripleSolution> {
    for f in [f1, f2, f3] {
        if ((f[0] * f[0] + f[1] * f[1]).sqrt() - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitNorm);
        }
    }
    let [d1, d2, d3] = [diagram2(f1), diagram2(f2), diagram2(f3)];
    let j1 = rotate_j(d1);
    let p2 = dot(&j1, &d2);
    let p3 = dot(&j1, &d3);

    let (s2, s3) = if p2.abs() <= SIGN_TOL && p3.abs() <= SIGN_TOL {
        (1.0, 1.0)
    } else if p2 * p3 < 0.0 {
        (p3.abs(), p2.abs())
    } else {
        return Ok(TripleSolution::Infeasible);
    };
    let s1 = -(d1[0] * (s2 * d2[0] + s3 * d3[0]) + d1[1] * (s2 * d2[1] + s3 * d3[1]));
    if s1 < -SIGN_TOL {
        return Ok(TripleSolution::Infeasible);
    }
    let s1 = s1.max(0.0);
    let residual = [0, 1].map(|l| s1 * d1[l] + s2 * d2[l] + s3 * d3[l]);
    if residual[0].hypot(residual[1]) > TRIPLE_RESIDUAL {
        return Ok(TripleSolution::Infeasible);
    }
    Ok(TripleSolution::Feasible([s1.sqrt(), s2.sqrt(), s3.sqrt()]))
}

/// A triple accepted by [`planar_scaling`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triple {
    /// Zero-based frame indices, anchor first.
    pub indices: [usize; 3],
    /// Local coefficients in the same order.
    pub coefficients: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarDecomposition {
    /// Orthogonal pairs, zero-based, `a < b`.
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<Triple>,
    /// Accumulated squared coefficients `C_i^2`.
    pub accumulated: Vec<f64>,
    /// `||sum C_i^2 f~_i||`.
    pub residual: f64,
}

impl PlanarDecomposition {
    /// `C_i = sqrt(C_i^2)`; the scaled frame is tight with bound
    /// `sum C_i^2 / 2`.
    pub fn coefficients(&self) -> Vec<f64> {
        self.accumulated.iter().map(|c| c.sqrt()).collect()
    }

    pub fn lambda(&self) -> f64 {
        self.accumulated.iter().sum::<f64>() / 2.0
    }

    /// Coefficients rescaled so that the bound is 1.
    pub fn normalized_coefficients(&self) -> Vec<f64> {
        let s = self.lambda().sqrt();
        self.coefficients().into_iter().map(|c| c / s).collect()
    }
}

/// Builds scaling coefficients for a planar frame from orthogonal pairs and
/// balanced triples.
///
/// Every orthogonal pair contributes 1 to both squared coefficients. Each
/// vector not orthogonal to any other then anchors every feasible triple
/// with two other vectors, and those local squared coefficients are added
/// in. With `require_q` the frame is checked for property (Q) first.
pub fn planar_scaling(frame: &Frame, require_q: bool) -> Result<PlanarDecomposition> {
    frame.require_real()?;
    frame.require_unit_norm()?;
    if frame.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: frame.n(),
        });
    }
    if require_q && !property_q(frame)? {
        return Err(Error::PropertyQViolated);
    }
    let k = frame.k();
    let vectors: Vec<[f64; 2]> = (0..k)
        .map(|i| {
            let v = frame.real_vector(i);
            [v[0], v[1]]
        })
        .collect();
    let orthogonal = |a: usize, b: usize| dot(&vectors[a], &vectors[b]).abs() <= ORTHOGONALITY_TOL;

    let mut accumulated = vec![0.0; k];
    let mut pairs = Vec::new();
    let mut in_pair = vec![false; k];
    for a in 0..k {
        for b in (a + 1)..k {
            if orthogonal(a, b) {
                pairs.push((a, b));
                accumulated[a] += 1.0;
                accumulated[b] += 1.0;
                in_pair[a] = true;
                in_pair[b] = true;
            }
        }
    }

    let mut triples = Vec::new();
    for a in (0..k).filter(|&a| !in_pair[a]) {
        for b in (0..k).filter(|&b| b != a) {
            for c in (b + 1..k).filter(|&c| c != a) {
                if let TripleSolution::Feasible(local) = solve_triple(vectors[a], vectors[b], vectors[c])? {
                    for (idx, coeff) in [a, b, c].into_iter().zip(local) {
                        accumulated[idx] += coeff * coeff;
                    }
                    triples.push(Triple {
                        indices: [a, b, c],
                        coefficients: local,
                    });
                }
            }
        }
    }

    let mut sum = [0.0; 2];
    for (v, &w) in vectors.iter().zip(&accumulated) {
        let d = diagram2(*v);
        sum[0] += w * d[0];
        sum[1] += w * d[1];
    }
    let residual = sum[0].hypot(sum[1]);
    let total: f64 = accumulated.iter().sum();
    let zero_indices: Vec<usize> = (0..k).filter(|&i| accumulated[i] <= 0.0).collect();
    if !zero_indices.is_empty() || residual > ACCUMULATION_TOL * total {
        return Err(Error::AccumulationFailed {
            residual,
            zero_indices,
        });
    }
    Ok(PlanarDecomposition {
        pairs,
        triples,
        accumulated,
        residual,
    })
}
