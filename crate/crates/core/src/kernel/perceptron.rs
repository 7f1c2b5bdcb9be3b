use super::{dot, norm};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronOutcome {
    /// Satisfies `<y, r_i> > 0` for every point.
    pub y: Vec<f64>,
    pub updates: usize,
}

/// Classical perceptron on the normalized points.
///
/// Starting from `y0`, repeatedly adds `r_i / ||r_i||` for the lowest index
/// with `<y, r_i> <= 0`. Fails with [`Error::IterationCap`] after `cap`
/// updates, which for a strictly separable input only happens when the
/// margin is below floating-point resolution.
pub fn perceptron_witness(points: &[Vec<f64>], y0: &[f64], cap: usize) -> Result<PerceptronOutcome> {
    let dim = y0.len();
    let mut units = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        let len = norm(p);
        if len == 0.0 || !len.is_finite() {
            // <y, 0> = 0 for every y
            return Err(Error::IterationCap { updates: 0 });
        }
        units.push(p.iter().map(|x| x / len).collect::<Vec<_>>());
    }

    let mut y = y0.to_vec();
    let mut updates = 0;
    while let Some(violated) = units.iter().position(|u| dot(&y, u) <= 0.0) {
        if updates == cap {
            return Err(Error::IterationCap { updates });
        }
        for (yj, uj) in y.iter_mut().zip(&units[violated]) {
            *yj += uj;
        }
        updates += 1;
    }
    debug_assert!(points.iter().all(|p| dot(&y, p) > 0.0));
    Ok(PerceptronOutcome { y, updates })
}
