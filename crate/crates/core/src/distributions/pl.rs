use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameter of the Poisson-Lindley distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlParams {
    theta: f64,
}

/// `ln(theta+1) * (k+3)` above which `(theta+1)^(k+3)` is evaluated in log space.
const POW_LOG_LIMIT: f64 = 700.0;

impl PlParams {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `theta^2 (k + theta + 2) / (theta + 1)^(k + 3)`.
    pub fn pmf(&self, k: u64) -> f64 {
        let t = self.theta;
        let exponent = k as f64 + 3.0;
        let log_base = t.ln_1p();
        if exponent * log_base > POW_LOG_LIMIT {
            (2.0 * t.ln() + (k as f64 + t + 2.0).ln() - exponent * log_base).exp()
        } else {
            t * t * (k as f64 + t + 2.0) / (t + 1.0).powf(exponent)
        }
    }

    pub fn ln_pmf(&self, k: u64) -> f64 {
        let t = self.theta;
        2.0 * t.ln() + (k as f64 + t + 2.0).ln() - (k as f64 + 3.0) * t.ln_1p()
    }

    /// `P(Y > k) = [theta^2 + (k+3) theta + 1] / (theta+1)^(k+3)` for integer `k >= 0`.
    pub(crate) fn upper_tail(&self, k: u64) -> f64 {
        let t = self.theta;
        let exponent = k as f64 + 3.0;
        let num = t * t + exponent * t + 1.0;
        let log_base = t.ln_1p();
        if exponent * log_base > POW_LOG_LIMIT {
            (num.ln() - exponent * log_base).exp()
        } else {
            num / (t + 1.0).powf(exponent)
        }
    }

    pub fn cdf(&self, k: u64) -> f64 {
        1.0 - self.upper_tail(k)
    }

    pub fn mean(&self) -> f64 {
        let t = self.theta;
        (t + 2.0) / (t * (t + 1.0))
    }

    pub fn variance(&self) -> f64 {
        let t = self.theta;
        (t.powi(3) + 4.0 * t * t + 6.0 * t + 2.0) / (t * t * (t + 1.0).powi(2))
    }

    /// Variance-to-mean ratio; always above 1.
    pub fn fisher_index(&self) -> f64 {
        let t = self.theta;
        (t.powi(3) + 4.0 * t * t + 6.0 * t + 2.0) / (t * (t + 1.0) * (t + 2.0))
    }

    /// `P(Y = 0) = theta^2 (theta+2) / (theta+1)^3`.
    pub fn p0(&self) -> f64 {
        let t = self.theta;
        t * t * (t + 2.0) / (t + 1.0).powi(3)
    }

    /// Derivative of `p0` with respect to theta, `theta (theta+4) / (theta+1)^4`.
    pub fn p0_derivative(&self) -> f64 {
        let t = self.theta;
        t * (t + 4.0) / (t + 1.0).powi(4)
    }
}
