use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::{Error, Result};

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")))
    }
}

pub(crate) fn poisson_pmf_unchecked(lambda: f64, k: u64) -> f64 {
    (k as f64 * lambda.ln() - lambda - ln_factorial(k)).exp()
}

/// Poisson probability `lambda^k e^-lambda / k!`.
pub fn poisson_pmf(lambda: f64, k: u64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(poisson_pmf_unchecked(lambda, k))
}

/// Zero-modified Poisson: `pi 1{k=0} + (1 - pi) Poisson(k; lambda)`, with
/// `-e^-lambda / (1 - e^-lambda) <= pi <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZmpParams {
    lambda: f64,
    pi: f64,
}

impl ZmpParams {
    pub fn new(lambda: f64, pi: f64) -> Result<Self> {
        check_lambda(lambda)?;
        let lower = Self::pi_lower_bound(lambda);
        if !(pi >= lower && pi <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "pi = {pi} outside [{lower}, 1] for lambda = {lambda}"
            )));
        }
        Ok(Self { lambda, pi })
    }

    /// `-e^-lambda / (1 - e^-lambda)`, where the zero cell vanishes.
    pub fn pi_lower_bound(lambda: f64) -> f64 {
        -1.0 / lambda.exp_m1()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn pi(&self) -> f64 {
        self.pi
    }

    pub fn pmf(&self, k: u64) -> f64 {
        let base = poisson_pmf_unchecked(self.lambda, k);
        if k == 0 {
            self.pi + (1.0 - self.pi) * base
        } else {
            (1.0 - self.pi) * base
        }
    }
}
