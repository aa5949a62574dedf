use serde::{Deserialize, Serialize};

use crate::estimation::FitResult;
use crate::special::chi_square_sf;

/// Gradient statistic for `H0: pi = 0` and its chi-square(1) p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientTestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub dof: usize,
}

/// `S_g = n * pi^2 * (theta^2 + 3 theta + 1)` at the unrestricted MLE.
pub fn gradient_test(fit: &FitResult, n: u64) -> GradientTestResult {
    let t = fit.theta;
    let statistic = n as f64 * fit.pi * fit.pi * (t * t + 3.0 * t + 1.0);
    GradientTestResult { statistic, p_value: chi_square_sf(statistic, 1), dof: 1 }
}
