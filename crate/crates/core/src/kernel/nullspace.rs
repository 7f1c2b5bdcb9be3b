use nalgebra::DMatrix;

use super::eigen::sym_eigen;
use crate::config::{Config, BORDERLINE_FACTOR};
use crate::error::{Error, Result};

/// Numerical null space of a symmetric PSD matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSpaceData {
    /// `k x l` matrix whose orthonormal columns `v_1 .. v_l` span the null space.
    pub basis: DMatrix<f64>,
    /// The rows of `basis`: `r_i = (v_1(i), ..., v_l(i))`.
    pub rows: Vec<Vec<f64>>,
    /// Full spectrum, ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues at or below this are treated as zero.
    pub threshold: f64,
    /// Smallest retained eigenvalue minus largest discarded one; a missing
    /// side counts as zero.
    pub rank_gap: f64,
    /// Some eigenvalue lies within a factor of ten of `threshold`.
    pub borderline: bool,
}

impl NullSpaceData {
    pub fn nullity(&self) -> usize {
        self.basis.ncols()
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows() - self.basis.ncols()
    }
}

/// Span of the eigenvectors whose eigenvalue is at most
/// `tau_null * max(1, lambda_max)`.
pub fn null_space(m: &DMatrix<f64>, cfg: &Config) -> Result<NullSpaceData> {
    let eig = sym_eigen(m, cfg)?;
    let k = m.nrows();
    let psd_floor = -cfg.tau_psd * m.norm();
    if let Some(&lowest) = eig.values.first() {
        if lowest < psd_floor {
            return Err(Error::NotPsd { eigenvalue: lowest });
        }
    }
    let lambda_max = eig.values.last().copied().unwrap_or(0.0);
    let threshold = cfg.tau_null * lambda_max.max(1.0);
    let l = eig.values.iter().take_while(|&&v| v <= threshold).count();

    let basis = eig.vectors.columns(0, l).into_owned();
    let rows = (0..k)
        .map(|i| basis.row(i).iter().copied().collect())
        .collect();
    let discarded_max = if l > 0 { eig.values[l - 1] } else { 0.0 };
    let retained_min = eig.values.get(l).copied().unwrap_or(0.0);
    let borderline = eig.values.iter().any(|&v| {
        v >= threshold / BORDERLINE_FACTOR && v <= threshold * BORDERLINE_FACTOR
    });

    Ok(NullSpaceData {
        basis,
        rows,
        eigenvalues: eig.values,
        threshold,
        rank_gap: retained_min - discarded_max,
        borderline,
    })
}
