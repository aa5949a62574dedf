use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CountSample, PlParams};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Iteration cap of the sequential quantile search.
pub const QUANTILE_MAX_ITER: u64 = 1_000_000;

/// Smallest admissible zero-modification parameter for a given `theta`,
/// `-theta^2 (theta+2) / (theta^2 + 3 theta + 1)`. At this value the zero
/// cell has probability exactly 0 (zero-truncated Poisson-Lindley).
pub fn pi_lower_bound(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")));
    }
    Ok(lower_bound(theta))
}

#[inline]
pub(crate) fn lower_bound(theta: f64) -> f64 {
    -theta * theta * (theta + 2.0) / (theta * theta + 3.0 * theta + 1.0)
}

/// Parameters `(theta, pi)` of the zero-modified Poisson-Lindley
/// distribution. Construction fails outside the admissible region
/// `theta > 0`, `pi_lower_bound(theta) <= pi <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZmplParams {
    theta: f64,
    pi: f64,
}

/// First two moments and dispersion summaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub second_raw_moment: f64,
    pub variance: f64,
    pub fisher_index: f64,
}

impl ZmplParams {
    pub fn new(theta: f64, pi: f64) -> Result<Self> {
        let lower = pi_lower_bound(theta)?;
        if !(pi >= lower && pi <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "pi = {pi} outside [{lower}, 1] for theta = {theta}"
            )));
        }
        Ok(Self { theta, pi })
    }

    /// The zero-truncated limit, `pi = pi_lower_bound(theta)`.
    pub fn zero_truncated(theta: f64) -> Result<Self> {
        let pi = pi_lower_bound(theta)?;
        Ok(Self { theta, pi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn pi(&self) -> f64 {
        self.pi
    }

    pub fn base(&self) -> PlParams {
        PlParams::new(self.theta).expect("validated theta")
    }

    /// True when `pi` is strictly inside `(pi_lower_bound(theta), 1)`.
    pub fn is_interior(&self) -> bool {
        self.pi > lower_bound(self.theta) && self.pi < 1.0
    }

    /// Probability of the zero cell, `pi + (1 - pi) p0(theta)`.
    pub fn zero_mass(&self) -> f64 {
        (self.pi + (1.0 - self.pi) * self.base().p0()).clamp(0.0, 1.0)
    }

    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            self.zero_mass()
        } else {
            (1.0 - self.pi) * self.base().pmf(k)
        }
    }

    pub fn ln_pmf(&self, k: u64) -> f64 {
        if k == 0 {
            self.zero_mass().ln()
        } else {
            (1.0 - self.pi).ln() + self.base().ln_pmf(k)
        }
    }

    /// `P(X <= x)`; uses the integer part of `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x < 0.0 {
            return 0.0;
        }
        if x >= u64::MAX as f64 {
            return 1.0;
        }
        self.cdf_at(x.floor() as u64)
    }

    fn cdf_at(&self, k: u64) -> f64 {
        (1.0 - (1.0 - self.pi) * self.base().upper_tail(k)).clamp(0.0, 1.0)
    }

    /// `P(X >= x)`: 1 for `x <= 0`, otherwise `P(X >= ceil(x))`, which at an
    /// integer `k >= 1` is `(1 - pi) [(theta+1)^2 + k theta] / (theta+1)^(k+2)`.
    pub fn survival(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= 0.0 {
            return 1.0;
        }
        if x > u64::MAX as f64 {
            return 0.0;
        }
        let k = x.ceil() as u64;
        ((1.0 - self.pi) * self.base().upper_tail(k - 1)).clamp(0.0, 1.0)
    }

    /// Smallest `k` with `cdf(k) >= p`, for `0 <= p < 1`.
    pub fn quantile(&self, p: f64) -> Result<u64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("probability must be in [0, 1), got {p}")));
        }
        if self.pi >= 1.0 {
            return Ok(0);
        }
        let p_pi = (p - self.pi) / (1.0 - self.pi);
        if p_pi < 0.0 {
            return Ok(0);
        }
        self.quantile_from(0, p)
    }

    fn quantile_from(&self, start: u64, p: f64) -> Result<u64> {
        let mut k = start;
        while self.cdf_at(k) < p {
            k += 1;
            if k - start > QUANTILE_MAX_ITER {
                return Err(Error::Numerical(format!(
                    "quantile search for p = {p} exceeded {QUANTILE_MAX_ITER} steps"
                )));
            }
        }
        Ok(k)
    }

    /// Mean, second raw moment, variance and Fisher index of dispersion.
    pub fn moments(&self) -> Result<Moments> {
        if self.pi >= 1.0 {
            return Err(Error::InvalidParameter(
                "moments are degenerate at pi = 1 (mean is 0)".into(),
            ));
        }
        let t = self.theta;
        let base = self.base();
        let mean = (1.0 - self.pi) * base.mean();
        let second_raw_moment =
            (1.0 - self.pi) * ((t + 2.0).powi(2) + 2.0) / (t * t * (t + 1.0));
        let variance = second_raw_moment - mean * mean;
        let fisher_index = self.pi * base.mean() + base.fisher_index();
        Ok(Moments { mean, second_raw_moment, variance, fisher_index })
    }

    /// `n` i.i.d. draws using a generator seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<CountSample> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be at least 1".into()));
        }
        let mut rng = crate::rng::stream(&[seed]);
        Ok(ZmplSampler::new(*self).sample(n, &mut rng))
    }
}

/// Inverse-cdf sampler with a precomputed cdf table.
///
/// Inversion is valid for every admissible `pi`, including deflation
/// (`pi < 0`) where the two-component mixture reading does not apply.
#[derive(Debug, Clone)]
pub struct ZmplSampler {
    params: ZmplParams,
    table: Vec<f64>,
}

const TABLE_MAX: u64 = 4096;

impl ZmplSampler {
    pub fn new(params: ZmplParams) -> Self {
        let mut table = Vec::new();
        let mut k = 0;
        loop {
            let c = params.cdf_at(k);
            table.push(c);
            k += 1;
            if c >= 1.0 - 1e-16 || k >= TABLE_MAX {
                break;
            }
        }
        Self { params, table }
    }

    pub fn params(&self) -> ZmplParams {
        self.params
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.sample(Open01);
        let k = self.table.partition_point(|&c| c < u) as u64;
        if (k as usize) < self.table.len() {
            k
        } else {
            // beyond the table; continue the sequential search
            self.params
                .quantile_from(k, u)
                .unwrap_or(QUANTILE_MAX_ITER)
        }
    }

    pub fn sample(&self, n: usize, rng: &mut StreamRng) -> CountSample {
        let values = (0..n).map(|_| self.draw(rng)).collect();
        CountSample::from_values(values).expect("n >= 1")
    }
}
