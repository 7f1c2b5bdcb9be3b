use serde::{Deserialize, Serialize};

/// Numerical tolerances and iteration limits shared by every operation.
///
/// Relative tolerances are scaled as documented on each field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Allowed deviation `| ||f|| - 1 |` for unit-norm vectors.
    pub tau_unit: f64,
    /// Allowed asymmetry `|M_ij - M_ji|`, relative to `max(1, ||M||_F)`.
    pub tau_sym: f64,
    /// Tightness tolerance, relative to `max(1, lambda)`.
    pub tau_tight: f64,
    /// Most negative eigenvalue accepted as PSD, relative to `||M||_F`.
    pub tau_psd: f64,
    /// Null-space threshold, relative to `max(1, lambda_max)`.
    pub tau_null: f64,
    /// Distance from the origin below which a convex hull contains it.
    pub tau_hull: f64,
    /// Rank threshold of the frame operator, relative to `max(1, lambda_max)`.
    pub tau_rank: f64,
    pub max_jacobi_sweeps: usize,
    pub max_hull_iterations: usize,
    pub max_perceptron_updates: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tau_unit: 1e-8,
            tau_sym: 1e-12,
            tau_tight: 1e-9,
            tau_psd: 1e-10,
            tau_null: 1e-8,
            tau_hull: 1e-9,
            tau_rank: 1e-10,
            max_jacobi_sweeps: 100,
            max_hull_iterations: 1_000_000,
            max_perceptron_updates: 1_000_000,
        }
    }
}

/// Values within this factor of a tolerance are reported as borderline.
pub const BORDERLINE_FACTOR: f64 = 10.0;
