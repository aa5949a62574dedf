use serde::{Deserialize, Serialize};

use crate::distributions::{CountSample, PlParams, ZmplParams};
use crate::{Error, Result};

/// Frequency-table summaries the likelihood depends on.
pub(crate) struct Summary {
    pub n: f64,
    pub n0: f64,
    /// `(value, frequency)` for positive values.
    pub positive: Vec<(f64, f64)>,
    /// Sum of the positive observations.
    pub total: f64,
}

impl Summary {
    pub fn new(sample: &CountSample) -> Self {
        let positive: Vec<(f64, f64)> = sample
            .freq()
            .iter()
            .filter(|(&v, _)| v > 0)
            .map(|(&v, &f)| (v as f64, f as f64))
            .collect();
        let total = positive.iter().map(|(v, f)| v * f).sum();
        Self { n: sample.n() as f64, n0: sample.n0() as f64, positive, total }
    }

    pub fn log_likelihood(&self, theta: f64, pi: f64) -> f64 {
        let t = theta;
        let n_pos = self.n - self.n0;
        let mut ll = 0.0;
        if self.n0 > 0.0 {
            let z = pi + (1.0 - pi) * t * t * (t + 2.0) / (t + 1.0).powi(3);
            ll += if z > 0.0 { self.n0 * z.ln() } else { f64::NEG_INFINITY };
        }
        if n_pos > 0.0 {
            if pi >= 1.0 {
                return f64::NEG_INFINITY;
            }
            ll += n_pos * ((1.0 - pi).ln() + 2.0 * t.ln() - 3.0 * t.ln_1p());
            ll += self.positive.iter().map(|(v, f)| f * (v + t + 2.0).ln()).sum::<f64>();
            ll -= t.ln_1p() * self.total;
        }
        ll
    }

    /// Partial derivatives `(d/dtheta, d/dpi)`; terms with a zero count are
    /// dropped so the expressions stay finite on the zero-truncated boundary.
    pub fn partials(&self, theta: f64, pi: f64) -> (f64, f64) {
        let t = theta;
        let base = PlParams::new(t).expect("positive theta");
        let p0 = base.p0();
        let dp0 = base.p0_derivative();
        let z = pi + (1.0 - pi) * p0;
        let n_pos = self.n - self.n0;
        let (mut d_theta, mut d_pi) = (0.0, 0.0);
        if self.n0 > 0.0 {
            d_pi += self.n0 * (1.0 - p0) / z;
            d_theta += self.n0 * (1.0 - pi) * dp0 / z;
        }
        if n_pos > 0.0 {
            d_pi -= n_pos / (1.0 - pi);
            d_theta -= n_pos * (t - 2.0) / (t * (t + 1.0));
            d_theta += self.positive.iter().map(|(v, f)| f / (v + t + 2.0)).sum::<f64>();
            d_theta -= self.total / (t + 1.0);
        }
        (d_theta, d_pi)
    }

    pub fn profile_pi(&self, theta: f64) -> f64 {
        profile_pi_raw(theta, self.n0 / self.n)
    }
}

fn profile_pi_raw(theta: f64, zero_fraction: f64) -> f64 {
    let t = theta;
    let pi = 1.0 - (1.0 - zero_fraction) * (t + 1.0).powi(3) / (t * t + 3.0 * t + 1.0);
    pi.max(crate::distributions::pi_lower_bound(t).expect("positive theta"))
}

/// Maximizer of the likelihood in `pi` for fixed `theta`:
/// `1 - (1 - n0/n) (theta+1)^3 / (theta^2 + 3 theta + 1)`. With no zeros this
/// is the lower bound of `pi`.
pub fn profile_pi(theta: f64, n0: u64, n: u64) -> Result<f64> {
    if !(theta > 0.0) || n == 0 || n0 > n {
        return Err(Error::InvalidParameter(format!(
            "profile_pi needs theta > 0 and n0 <= n (theta={theta}, n0={n0}, n={n})"
        )));
    }
    Ok(profile_pi_raw(theta, n0 as f64 / n as f64))
}

/// Log-likelihood of `params` given the sample, evaluated from the frequency
/// table. Returns `-inf` when the zero cell has probability 0 but zeros were
/// observed.
pub fn log_likelihood(params: &ZmplParams, sample: &CountSample) -> f64 {
    Summary::new(sample).log_likelihood(params.theta(), params.pi())
}

/// Score vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub d_theta: f64,
    pub d_pi: f64,
}

impl Score {
    pub fn norm(&self) -> f64 {
        self.d_theta.hypot(self.d_pi)
    }
}

/// Analytic score. Requires `pi` strictly inside the admissible interval.
pub fn score(params: &ZmplParams, sample: &CountSample) -> Result<Score> {
    if !params.is_interior() {
        return Err(Error::Boundary(format!(
            "score undefined at pi = {} for theta = {}",
            params.pi(),
            params.theta()
        )));
    }
    let (d_theta, d_pi) = Summary::new(sample).partials(params.theta(), params.pi());
    Ok(Score { d_theta, d_pi })
}
