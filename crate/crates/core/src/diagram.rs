//! Diagram vectors: the quadratic lift under which tightness of a frame
//! becomes linear.
//!
//! For `f` in `R^n` the diagram vector has `n(n-1)` real entries: first the
//! differences `f(i)^2 - f(j)^2` for all pairs `i < j` in lexicographic
//! order, then the products `sqrt(2n) f(i) f(j)` over the same pairs, all
//! divided by `sqrt(n-1)`. For `f` in `C^n` it has `3n(n-1)/2` complex
//! entries: the differences `|f(i)|^2 - |f(j)|^2`, then for each pair the two
//! entries `sqrt(n) f(i) conj(f(j))` and `sqrt(n) conj(f(i)) f(j)`, again
//! divided by `sqrt(n-1)`.
//!
//! Every pair `i < j` is used, not only adjacent ones, so that
//! `(n-1) <f~, g~> = n |<f, g>|^2 - ||f||^2 ||g||^2` holds exactly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frame::{inner, norm_sqr, Field, Frame};

#[derive(Debug, Clone, PartialEq)]
pub enum DiagramData {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramVector {
    n: usize,
    data: DiagramData,
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

impl DiagramVector {
    fn zeros(field: Field, n: usize) -> Self {
        let m = n * (n - 1) / 2;
        let data = match field {
            Field::Real => DiagramData::Real(vec![0.0; 2 * m]),
            Field::Complex => DiagramData::Complex(vec![Complex64::new(0.0, 0.0); 3 * m]),
        };
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        match self.data {
            DiagramData::Real(_) => Field::Real,
            DiagramData::Complex(_) => Field::Complex,
        }
    }

    pub fn data(&self) -> &DiagramData {
        &self.data
    }

    pub fn len(&self) -> usize {
        match &self.data {
            DiagramData::Real(v) => v.len(),
            DiagramData::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Real entries; `None` for a complex diagram vector.
    pub fn as_real(&self) -> Option<&[f64]> {
        match &self.data {
            DiagramData::Real(v) => Some(v),
            DiagramData::Complex(_) => None,
        }
    }

    /// Entries as complex numbers regardless of field.
    pub fn to_complex(&self) -> Vec<Complex64> {
        match &self.data {
            DiagramData::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            DiagramData::Complex(v) => v.clone(),
        }
    }

    /// `<self, other>`; real in both fields.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        match (&self.data, &other.data) {
            (DiagramData::Real(a), DiagramData::Real(b)) if a.len() == b.len() => {
                Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
            }
            (DiagramData::Complex(a), DiagramData::Complex(b)) if a.len() == b.len() => {
                Ok(inner(a, b).re)
            }
            _ => Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            }),
        }
    }

    pub fn norm(&self) -> f64 {
        match &self.data {
            DiagramData::Real(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            DiagramData::Complex(v) => norm_sqr(v).sqrt(),
        }
    }

    fn add_scaled(&mut self, weight: f64, other: &Self) {
        match (&mut self.data, &other.data) {
            (DiagramData::Real(a), DiagramData::Real(b)) => {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += weight * y)
            }
            (DiagramData::Complex(a), DiagramData::Complex(b)) => {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y * weight)
            }
            _ => unreachable!("diagram vectors of one frame share a field"),
        }
    }
}

/// The diagram vector of `f`, read as an element of `field^n` with
/// `n = f.len()`.
pub fn diagram_vector(f: &[Complex64], field: Field) -> Result<DiagramVector> {
    let n = f.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let nf = n as f64;
    let outer = 1.0 / (nf - 1.0).sqrt();
    let data = match field {
        Field::Real => {
            let mut diffs = Vec::with_capacity(n * (n - 1));
            let mut prods = Vec::with_capacity(n * (n - 1) / 2);
            let c = (2.0 * nf).sqrt();
            for (i, j) in pairs(n) {
                let (a, b) = (f[i].re, f[j].re);
                diffs.push((a * a - b * b) * outer);
                prods.push(c * a * b * outer);
            }
            diffs.extend(prods);
            DiagramData::Real(diffs)
        }
        Field::Complex => {
            let mut diffs = Vec::with_capacity(3 * n * (n - 1) / 2);
            let mut prods = Vec::with_capacity(n * (n - 1));
            let c = nf.sqrt();
            for (i, j) in pairs(n) {
                let d = f[i].norm_sqr() - f[j].norm_sqr();
                diffs.push(Complex64::new(d * outer, 0.0));
                prods.push(f[i] * f[j].conj() * (c * outer));
                prods.push(f[i].conj() * f[j] * (c * outer));
            }
            diffs.extend(prods);
            DiagramData::Complex(diffs)
        }
    };
    Ok(DiagramVector { n, data })
}

/// Real-field shorthand for [`diagram_vector`].
pub fn real_diagram_vector(f: &[f64]) -> Result<DiagramVector> {
    let z: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    diagram_vector(&z, Field::Real)
}

/// `<f~, g~> = (n |<f, g>|^2 - ||f||^2 ||g||^2) / (n - 1)`, computed in
/// `O(n)` without building either diagram vector.
pub fn diagram_inner(f: &[Complex64], g: &[Complex64]) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    let n = f.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let nf = n as f64;
    Ok((nf * inner(f, g).norm_sqr() - norm_sqr(f) * norm_sqr(g)) / (nf - 1.0))
}

/// Gramian of the diagram vectors of a unit-norm frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramGramian {
    pub matrix: DMatrix<f64>,
}

pub fn diagram_gramian(frame: &Frame) -> Result<DiagramGramian> {
    frame.require_unit_norm()?;
    let k = frame.k();
    let vs = frame.vectors();
    let mut m = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = diagram_inner(&vs[i], &vs[j])?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(DiagramGramian { matrix: m })
}

pub fn diagram_vectors(frame: &Frame) -> Vec<DiagramVector> {
    frame
        .vectors()
        .iter()
        .map(|v| diagram_vector(v, frame.field()).expect("frames have n >= 2"))
        .collect()
}

/// `sum_i w_i f~_i` for nonnegative weights `w_i` (the squared coefficients).
pub fn diagram_sum(frame: &Frame, weights: &[f64]) -> Result<DiagramVector> {
    if weights.len() != frame.k() {
        return Err(Error::LengthMismatch {
            expected: frame.k(),
            found: weights.len(),
        });
    }
    if let Some((index, &value)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
    {
        return Err(Error::NegativeCoefficient { index, value });
    }
    let mut sum = DiagramVector::zeros(frame.field(), frame.n());
    for (v, &w) in frame.vectors().iter().zip(weights) {
        sum.add_scaled(w, &diagram_vector(v, frame.field())?);
    }
    Ok(sum)
}

/// Tightness via `||sum_i f~_i|| <= tau * sum_i ||f_i||^2`.
pub fn is_tight_by_diagram(frame: &Frame, tau: f64) -> Result<bool> {
    let energy: f64 = frame.vectors().iter().map(|v| norm_sqr(v)).sum();
    if energy == 0.0 {
        return Err(Error::AllZeroFrame);
    }
    let sum = diagram_sum(frame, &vec![1.0; frame.k()])?;
    Ok(sum.norm() <= tau * energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use std::f64::consts::PI;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn planar_diagram_vectors() {
        assert_eq!(real_diagram_vector(&[1.0, 0.0]).unwrap().as_real().unwrap(), &[1.0, 0.0]);
        let h = 0.5f64.sqrt();
        let d = real_diagram_vector(&[h, h]).unwrap();
        assert!(close(d.as_real().unwrap(), &[0.0, 1.0], 1e-15));
    }

    #[test]
    fn e1_in_r3() {
        let d = real_diagram_vector(&[1.0, 0.0, 0.0]).unwrap();
        let s = 0.5f64.sqrt();
        assert!(close(d.as_real().unwrap(), &[s, s, 0.0, 0.0, 0.0, 0.0], 1e-15));
        assert!((d.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_layout() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let f = [one * 0.6, i * 0.8];
        let d = diagram_vector(&f, Field::Complex).unwrap();
        assert_eq!(d.len(), 3);
        let z = d.to_complex();
        // difference entry is real; the two products are conjugate
        assert_eq!(z[0].im, 0.0);
        assert!((z[1] - z[2].conj()).norm() < 1e-15);
        assert!((d.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn too_small_dimension() {
        assert_eq!(real_diagram_vector(&[1.0]), Err(Error::DimensionTooSmall(1)));
    }

    #[test]
    fn closed_form_inner_products() {
        let one = |n: usize, i: usize| -> Vec<Complex64> {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        };
        for n in 2..6 {
            assert!((diagram_inner(&one(n, 0), &one(n, 0)).unwrap() - 1.0).abs() < 1e-15);
            let expected = -1.0 / (n as f64 - 1.0);
            assert!((diagram_inner(&one(n, 0), &one(n, 1)).unwrap() - expected).abs() < 1e-15);
        }
        let h = 0.5f64.sqrt();
        let f = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let g = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
        assert!(diagram_inner(&f, &g).unwrap().abs() < 1e-15);
        assert!(matches!(
            diagram_inner(&f, &g[..1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gramians() {
        let onb = diagram_gramian(&samples::orthonormal_basis(2)).unwrap();
        assert_eq!(onb.matrix, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let ex = diagram_gramian(&samples::worked_example()).unwrap();
        let expected =
            DMatrix::from_row_slice(3, 3, &[1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0]);
        assert!((ex.matrix - expected).norm() < 1e-15);
        let single = diagram_gramian(&Frame::real_unit(vec![vec![0.6, 0.8]]).unwrap()).unwrap();
        assert!((single.matrix[(0, 0)] - 1.0).abs() < 1e-15);
        let unflagged = Frame::from_real(vec![vec![1.0, 0.0]]).unwrap();
        assert_eq!(diagram_gramian(&unflagged), Err(Error::NotUnitNorm));
    }

    #[test]
    fn sums_and_tightness() {
        let onb = samples::orthonormal_basis(2);
        assert!(diagram_sum(&onb, &[1.0, 1.0]).unwrap().norm() < 1e-15);
        assert!(is_tight_by_diagram(&onb, 1e-9).unwrap());

        let ex = samples::worked_example();
        assert!(diagram_sum(&ex, &[1.0, 2.0, 1.0]).unwrap().norm() < 1e-15);
        let plain = diagram_sum(&ex, &[1.0, 1.0, 1.0]).unwrap();
        assert!(close(plain.as_real().unwrap(), &[1.0, 0.0], 1e-15));
        assert!(!is_tight_by_diagram(&ex, 1e-9).unwrap());

        let mercedes = samples::planar(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        assert!(is_tight_by_diagram(&mercedes, 1e-9).unwrap());

        assert!(matches!(
            diagram_sum(&ex, &[1.0, 1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        let zero = Frame::from_real(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(is_tight_by_diagram(&zero, 1e-9), Err(Error::AllZeroFrame));
    }

    #[test]
    fn sign_invariance_is_exact() {
        let f = [0.3, -0.5, 0.81];
        let g: Vec<f64> = f.iter().map(|x| -x).collect();
        assert_eq!(real_diagram_vector(&f).unwrap(), real_diagram_vector(&g).unwrap());
    }
}
