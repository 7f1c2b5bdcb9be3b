//! Fixtures shared by the benchmarks.

use framescale::{samples, Field, Frame};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded random unit-norm frame.
pub fn random_frame(seed: u64, field: Field, n: usize, k: usize) -> Frame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    samples::random_unit_frame(&mut rng, field, n, k)
}
