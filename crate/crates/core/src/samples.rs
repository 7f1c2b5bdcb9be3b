//! Named frames and seeded random frame generators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::frame::{Field, Frame};

/// Standard basis `e_1, ..., e_n` of `R^n`.
pub fn orthonormal_basis(n: usize) -> Frame {
    let vectors = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    Frame::real_unit(vectors).expect("standard basis is unit-norm")
}

/// `{e_1, e_2, -e_1}` in `R^2`.
pub fn worked_example() -> Frame {
    Frame::real_unit(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]])
        .expect("unit vectors")
}

/// `{e_1, e_2, e_3, (e_1 + e_2)/sqrt 2, (e_1 - e_2)/sqrt 2}` in `R^3`.
pub fn union_of_two_bases() -> Frame {
    let h = 0.5f64.sqrt();
    Frame::real_unit(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![h, h, 0.0],
        vec![h, -h, 0.0],
    ])
    .expect("unit vectors")
}

/// Unit vectors of `R^2` at the given angles.
pub fn planar(angles: &[f64]) -> Frame {
    let vectors = angles.iter().map(|a| vec![a.cos(), a.sin()]).collect();
    Frame::real_unit(vectors).expect("unit vectors")
}

/// Uniformly distributed unit vectors.
pub fn random_unit_frame<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize, k: usize) -> Frame {
    let vectors = (0..k).map(|_| random_unit_vector(rng, field, n)).collect();
    Frame::new(field, vectors)
        .and_then(|f| f.normalized())
        .expect("gaussian vectors are nonzero with probability one")
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng, field)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    match field {
        Field::Real => Complex64::new(re, 0.0),
        Field::Complex => Complex64::new(re, rng.sample(StandardNormal)),
    }
}

/// Haar-like random orthonormal (real) or unitary (complex) basis, from
/// modified Gram-Schmidt on a Gaussian matrix.
pub fn random_orthonormal_basis<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Vec<Vec<Complex64>> {
    loop {
        let m = DMatrix::from_fn(n, n, |_, _| gaussian(rng, field));
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v: Vec<Complex64> = m.column(j).iter().copied().collect();
            for b in &basis {
                let proj: Complex64 = v.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
        if ok {
            return basis;
        }
    }
}

/// Union of `copies` independent random orthonormal bases: a unit-norm
/// tight frame with `lambda = copies`.
pub fn random_tight_frame<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize, copies: usize) -> Frame {
    let vectors = (0..copies)
        .flat_map(|_| random_orthonormal_basis(rng, field, n))
        .collect();
    Frame::new(field, vectors)
        .and_then(|f| f.normalized())
        .expect("orthonormal vectors")
}

/// Adds Gaussian noise of size `scale` to every vector, then renormalizes.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, frame: &Frame, scale: f64) -> Frame {
    let vectors = frame
        .vectors()
        .iter()
        .map(|v| v.iter().map(|z| z + gaussian(rng, frame.field()) * scale).collect())
        .collect();
    Frame::new(frame.field(), vectors)
        .and_then(|f| f.normalized())
        .expect("perturbation keeps vectors nonzero")
}
