use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};

/// Full spectrum of a real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, column `j` belonging to `values[j]`.
    pub vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Cyclic Jacobi eigensolver.
///
/// Rotations are applied in row-major `(p, q)` order, `p < q`, until the
/// off-diagonal Frobenius norm drops to `1e-12 * ||M||_F`. Each returned
/// eigenvector is signed so that its largest-magnitude entry (first on
/// ties) is positive.
pub fn sym_eigen(m: &DMatrix<f64>, cfg: &Config) -> Result<EigenDecomposition> {
    let k = m.nrows();
    if m.ncols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: m.ncols(),
        });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidFrame("matrix has non-finite entries".into()));
    }
    let scale = m.norm();
    let mut asymmetry = 0.0_f64;
    for i in 0..k {
        for j in (i + 1)..k {
            asymmetry = asymmetry.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if asymmetry > cfg.tau_sym * scale.max(1.0) {
        return Err(Error::NotSymmetric { asymmetry });
    }

    let mut a = (m + m.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(k, k);
    let target = 1e-12 * scale;

    let mut converged = false;
    for _ in 0..=cfg.max_jacobi_sweeps {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: cfg.max_jacobi_sweeps,
        });
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DMatrix::<f64>::zeros(k, k);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src).into_owned();
        let mut lead = 0;
        for r in 1..k {
            if col[r].abs() > col[lead].abs() {
                lead = r;
            }
        }
        if k > 0 && col[lead] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let k = a.nrows();
    let mut sum = 0.0;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut DMatrix<f64>, v: &mut DMatrix<f64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    if t == 0.0 {
        return;
    }
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let k = a.nrows();
    for r in 0..k {
        let (arp, arq) = (a[(r, p)], a[(r, q)]);
        a[(r, p)] = c * arp - s * arq;
        a[(r, q)] = s * arp + c * arq;
    }
    for r in 0..k {
        let (apr, aqr) = (a[(p, r)], a[(q, r)]);
        a[(p, r)] = c * apr - s * aqr;
        a[(q, r)] = s * apr + c * aqr;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for r in 0..k {
        let (vrp, vrq) = (v[(r, p)], v[(r, q)]);
        v[(r, p)] = c * vrp - s * vrq;
        v[(r, q)] = s * vrp + c * vrq;
    }
}

/// Eigenvalues (ascending) of a Hermitian matrix.
///
/// `H = A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`,
/// whose spectrum is that of `H` with every eigenvalue doubled.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>, cfg: &Config) -> Result<Vec<f64>> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h.ncols(),
        });
    }
    if h.iter().all(|z| z.im == 0.0) {
        let re = h.map(|z| z.re);
        return Ok(sym_eigen(&re, cfg)?.values);
    }
    let mut embed = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            embed[(i, j)] = z.re;
            embed[(i + n, j + n)] = z.re;
            embed[(i, j + n)] = -z.im;
            embed[(i + n, j)] = z.im;
        }
    }
    let doubled = sym_eigen(&embed, cfg)?.values;
    Ok(doubled.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
}
