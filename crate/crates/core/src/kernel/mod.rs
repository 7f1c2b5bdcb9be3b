//! Dense numerical routines the scaling pipeline rests on.
//!
//! Everything here is deterministic: Jacobi sweeps run in a fixed cyclic
//! order and every argmin/argmax breaks ties toward the lowest index.

mod eigen;
mod hull;
mod nullspace;
mod perceptron;

pub use eigen::{hermitian_eigenvalues, sym_eigen, EigenDecomposition};
pub use hull::{hull_membership, min_norm_point, HullDecision, MinNormPoint};
pub use nullspace::{null_space, NullSpaceData};
pub use perceptron::{perceptron_witness, PerceptronOutcome};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
