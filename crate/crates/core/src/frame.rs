//! Frames and their classical operators.
//!
//! Inner products are conjugate-linear in the second argument:
//! `<f, g> = sum_l f(l) * conj(g(l))`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::kernel::hermitian_eigenvalues;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

/// An ordered sequence of `k` vectors in `R^n` or `C^n`.
///
/// Real frames are stored with zero imaginary parts so every operation can
/// run on complex arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    field: Field,
    n: usize,
    vectors: Vec<Vec<Complex64>>,
    unit_norm: bool,
}

pub(crate) fn inner(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter().zip(g).map(|(a, b)| a * b.conj()).sum()
}

pub(crate) fn norm_sqr(f: &[Complex64]) -> f64 {
    f.iter().map(|z| z.norm_sqr()).sum()
}

impl Frame {
    /// Builds a frame after checking shape and finiteness.
    pub fn new(field: Field, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::InvalidFrame("a frame needs at least one vector".into()));
        };
        let n = first.len();
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::InvalidFrame(format!(
                    "vector {i} has {} entries, expected {n}",
                    v.len()
                )));
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidFrame(format!("vector {i} has non-finite entries")));
            }
            if field == Field::Real && v.iter().any(|z| z.im != 0.0) {
                return Err(Error::InvalidFrame(format!(
                    "vector {i} has imaginary parts in a real frame"
                )));
            }
        }
        Ok(Self {
            field,
            n,
            vectors,
            unit_norm: false,
        })
    }

    pub fn from_real(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let vectors = vectors
            .into_iter()
            .map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::new(Field::Real, vectors)
    }

    pub fn from_complex(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::new(Field::Complex, vectors)
    }

    /// Real unit-norm frame checked against the default `tau_unit`.
    pub fn real_unit(vectors: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_real(vectors)?.into_unit_norm(Config::default().tau_unit)
    }

    /// Sets the unit-norm flag after checking `| ||f_i|| - 1 | <= tau_unit`.
    pub fn into_unit_norm(mut self, tau_unit: f64) -> Result<Self> {
        for (index, v) in self.vectors.iter().enumerate() {
            let norm = norm_sqr(v).sqrt();
            if (norm - 1.0).abs() > tau_unit {
                return Err(Error::NormViolation { index, norm });
            }
        }
        self.unit_norm = true;
        Ok(self)
    }

    /// Divides every vector by its norm and sets the unit-norm flag.
    pub fn normalized(mut self) -> Result<Self> {
        for (index, v) in self.vectors.iter_mut().enumerate() {
            let norm = norm_sqr(v).sqrt();
            if norm == 0.0 {
                return Err(Error::NormViolation { index, norm });
            }
            v.iter_mut().for_each(|z| *z /= norm);
        }
        self.unit_norm = true;
        Ok(self)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vectors.
    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_unit_norm(&self) -> bool {
        self.unit_norm
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.vectors[i]
    }

    /// Real parts of vector `i`; meaningful for real frames.
    pub fn real_vector(&self, i: usize) -> Vec<f64> {
        self.vectors[i].iter().map(|z| z.re).collect()
    }

    /// Frame consisting of the vectors at `indices`, in that order.
    pub fn subframe(&self, indices: &[usize]) -> Self {
        Self {
            field: self.field,
            n: self.n,
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
            unit_norm: self.unit_norm,
        }
    }

    pub(crate) fn require_unit_norm(&self) -> Result<()> {
        if self.unit_norm {
            Ok(())
        } else {
            Err(Error::NotUnitNorm)
        }
    }

    pub(crate) fn require_real(&self) -> Result<()> {
        match self.field {
            Field::Real => Ok(()),
            Field::Complex => Err(Error::RequiresRealField),
        }
    }
}

/// `S = sum_i f_i f_i^*`, an `n x n` Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOperator {
    pub field: Field,
    pub matrix: DMatrix<Complex64>,
}

/// `G_ij = <f_i, f_j>`, a `k x k` Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Gramian {
    pub field: Field,
    pub matrix: DMatrix<Complex64>,
}

fn symmetrize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).map(|z| z * 0.5)
}

pub fn frame_operator(frame: &Frame) -> FrameOperator {
    let n = frame.n();
    let mut s = DMatrix::<Complex64>::zeros(n, n);
    for f in frame.vectors() {
        for a in 0..n {
            for b in 0..n {
                s[(a, b)] += f[a] * f[b].conj();
            }
        }
    }
    FrameOperator {
        field: frame.field(),
        matrix: symmetrize(&s),
    }
}

pub fn gramian(frame: &Frame) -> Gramian {
    let k = frame.k();
    let vs = frame.vectors();
    let g = DMatrix::from_fn(k, k, |i, j| inner(&vs[i], &vs[j]));
    Gramian {
        field: frame.field(),
        matrix: symmetrize(&g),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    /// The frame operator has full rank `n`.
    pub is_frame: bool,
    pub is_tight: bool,
    /// `trace(S) / n`.
    pub lambda: f64,
    /// `||S - lambda I||_F`.
    pub residual: f64,
}

pub fn check_tight(frame: &Frame, cfg: &Config) -> Result<TightnessReport> {
    let s = frame_operator(frame).matrix;
    let n = frame.n();
    let lambda = s.trace().re / n as f64;
    let residual = (&s - DMatrix::<Complex64>::identity(n, n).map(|z| z * lambda)).norm();
    let eigenvalues = hermitian_eigenvalues(&s, cfg)?;
    let top = eigenvalues.last().copied().unwrap_or(0.0);
    let cutoff = cfg.tau_rank * top.max(1.0);
    let rank = eigenvalues.iter().filter(|&&v| v > cutoff).count();
    Ok(TightnessReport {
        is_frame: rank == n,
        is_tight: residual <= cfg.tau_tight * lambda.max(1.0),
        lambda,
        residual,
    })
}

/// The sequence `{c_i f_i}`. The unit-norm flag survives only when every
/// `c_i` is exactly one.
pub fn scale_frame(frame: &Frame, coefficients: &[f64]) -> Result<Frame> {
    if coefficients.len() != frame.k() {
        return Err(Error::LengthMismatch {
            expected: frame.k(),
            found: coefficients.len(),
        });
    }
    if let Some((index, &value)) = coefficients
        .iter()
        .enumerate()
        .find(|(_, c)| !(c.is_finite() && **c >= 0.0))
    {
        return Err(Error::NegativeCoefficient { index, value });
    }
    let vectors = frame
        .vectors()
        .iter()
        .zip(coefficients)
        .map(|(v, &c)| v.iter().map(|z| z * c).collect())
        .collect();
    Ok(Frame {
        field: frame.field(),
        n: frame.n(),
        vectors,
        unit_norm: frame.is_unit_norm() && coefficients.iter().all(|&c| c == 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn real_part(m: &DMatrix<Complex64>) -> DMatrix<f64> {
        m.map(|z| z.re)
    }

    #[test]
    fn orthonormal_basis_operators() {
        let f = samples::orthonormal_basis(2);
        assert_eq!(real_part(&frame_operator(&f).matrix), DMatrix::identity(2, 2));
        assert_eq!(real_part(&gramian(&f).matrix), DMatrix::identity(2, 2));
        let r = check_tight(&f, &Config::default()).unwrap();
        assert!(r.is_frame && r.is_tight);
        assert_eq!((r.lambda, r.residual), (1.0, 0.0));
    }

    #[test]
    fn worked_example_operators() {
        let f = samples::worked_example();
        let s = real_part(&frame_operator(&f).matrix);
        assert_eq!(s, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]));
        let g = real_part(&gramian(&f).matrix);
        assert_eq!(
            g,
            DMatrix::from_row_slice(3, 3, &[1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0])
        );
        let r = check_tight(&f, &Config::default()).unwrap();
        assert!(r.is_frame && !r.is_tight);
        assert_eq!(r.lambda, 1.5);
    }

    #[test]
    fn union_of_two_bases_operator() {
        let s = real_part(&frame_operator(&samples::union_of_two_bases()).matrix);
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, 1.0]));
        assert!((s - expected).norm() < 1e-15);
    }

    #[test]
    fn single_vector_gramian() {
        let f = Frame::real_unit(vec![vec![0.6, 0.8]]).unwrap();
        assert!((gramian(&f).matrix[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scaling_the_worked_example_makes_it_tight() {
        let f = samples::worked_example();
        let scaled = scale_frame(&f, &[1.0, 2f64.sqrt(), 1.0]).unwrap();
        let r = check_tight(&scaled, &Config::default()).unwrap();
        assert!(r.is_tight);
        assert!((r.lambda - 2.0).abs() < 1e-14);
        assert!(!scaled.is_unit_norm());
    }

    #[test]
    fn scale_edges() {
        let f = samples::worked_example();
        assert_eq!(scale_frame(&f, &[1.0; 3]).unwrap(), f);
        let zero = scale_frame(&f, &[0.0; 3]).unwrap();
        let r = check_tight(&zero, &Config::default()).unwrap();
        assert!(!r.is_frame);
        assert_eq!(
            scale_frame(&f, &[1.0, 1.0]),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        );
        assert!(matches!(
            scale_frame(&f, &[1.0, -1.0, 1.0]),
            Err(Error::NegativeCoefficient { index: 1, .. })
        ));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Frame::from_real(vec![]), Err(Error::InvalidFrame(_))));
        assert_eq!(Frame::from_real(vec![vec![1.0]]), Err(Error::DimensionTooSmall(1)));
        assert!(matches!(
            Frame::from_real(vec![vec![1.0, 0.0], vec![1.0]]),
            Err(Error::InvalidFrame(_))
        ));
        assert!(matches!(
            Frame::from_real(vec![vec![f64::NAN, 0.0]]),
            Err(Error::InvalidFrame(_))
        ));
        assert!(matches!(
            Frame::real_unit(vec![vec![0.9, 0.0]]),
            Err(Error::NormViolation { index: 0, .. })
        ));
    }

    #[test]
    fn complex_gramian_convention() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let f = Frame::from_complex(vec![vec![one, i], vec![i, one]]).unwrap();
        // <f1, f2> = 1 * conj(i) + i * conj(1) = -i + i = 0
        let g = gramian(&f).matrix;
        assert_eq!(g[(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(g[(0, 0)], Complex64::new(2.0, 0.0));
    }
}
