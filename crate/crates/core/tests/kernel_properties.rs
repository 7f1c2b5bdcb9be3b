use framescale::kernel::{hull_membership, sym_eigen};
use framescale::Config;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn random_symmetric(seed: u64, k: usize, rank: Option<usize>) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match rank {
        None => {
            let a = DMatrix::from_fn(k, k, |_, _| rng.sample::<f64, _>(StandardNormal));
            (&a + a.transpose()) * 0.5
        }
        Some(r) => {
            let b = DMatrix::from_fn(k, r, |_, _| rng.sample::<f64, _>(StandardNormal));
            &b * b.transpose()
        }
    }
}

/// Barycentric coordinates of the origin in triangle `abc`.
fn barycentric(a: &[f64], b: &[f64], c: &[f64]) -> Option<[f64; 3]> {
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    if det.abs() < 1e-12 {
        return None;
    }
    let u = ((-a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (-a[1])) / det;
    let v = ((b[0] - a[0]) * (-a[1]) - (-a[0]) * (b[1] - a[1])) / det;
    Some([1.0 - u - v, u, v])
}

/// Some(true/false) when every triangle decides clearly, None otherwise.
fn planar_oracle(points: &[Vec<f64>]) -> Option<bool> {
    let mut best = f64::NEG_INFINITY;
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            for c in b + 1..points.len() {
                if let Some(w) = barycentric(&points[a], &points[b], &points[c]) {
                    best = best.max(w.iter().copied().fold(f64::INFINITY, f64::min));
                }
            }
        }
    }
    if best > 1e-7 {
        Some(true)
    } else if best < -1e-7 || best == f64::NEG_INFINITY {
        // two points cannot enclose the origin generically
        Some(false)
    } else {
        None
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jacobi_matches_reference(seed: u64, k in 1usize..=50, low_rank: bool) {
        let rank = low_rank.then(|| (k / 3).max(1));
        let m = random_symmetric(seed, k, rank);
        let scale = m.norm().max(1.0);
        let ours = sym_eigen(&m, &Config::default()).unwrap();
        let mut reference: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        for (a, b) in ours.values.iter().zip(&reference) {
            prop_assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b}");
        }
        let v = &ours.vectors;
        let rebuilt = v * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(ours.values.clone())) * v.transpose();
        prop_assert!((rebuilt - &m).norm() <= 1e-10 * scale);
        prop_assert!((v.transpose() * v - DMatrix::identity(k, k)).norm() <= 1e-10 * k as f64);
        prop_assert!(ours.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn hull_matches_interval_oracle(values in prop::collection::vec(-1.0f64..1.0, 1..=6)) {
        let points: Vec<Vec<f64>> = values.iter().map(|&x| vec![x]).collect();
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assume!(lo.abs() > 1e-7 && hi.abs() > 1e-7);
        let d = hull_membership(&points, &Config::default()).unwrap();
        prop_assert_eq!(d.contains_zero, lo < 0.0 && hi > 0.0);
        prop_assert!(d.validate(&points, Config::default().tau_hull));
    }

    #[test]
    fn hull_matches_triangle_oracle(coords in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=6)) {
        let points: Vec<Vec<f64>> = coords.iter().map(|&(x, y)| vec![x, y]).collect();
        let expected = planar_oracle(&points);
        prop_assume!(expected.is_some());
        let d = hull_membership(&points, &Config::default()).unwrap();
        prop_assert_eq!(Some(d.contains_zero), expected);
        prop_assert!(d.validate(&points, Config::default().tau_hull));
    }
}
