use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::likelihood::Summary;
use super::mle::{mle_fit_with, MleOptions};
use super::{project_admissible, standard_errors, Boundary, Estimator, FitResult};
use crate::distributions::{CountSample, ZmplParams, ZmplSampler};
use crate::rng::{domain, stream, StreamRng};
use crate::{Error, Result};

/// Resampling scheme of the bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BootstrapScheme {
    /// Draw from the fitted ZMPL distribution.
    #[default]
    Parametric,
    /// Draw observations with replacement.
    Nonparametric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub seed: u64,
    pub scheme: BootstrapScheme,
    /// Largest tolerated share of replicates whose refit fails.
    pub max_failure_rate: f64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self { replicates: 1000, seed: 0, scheme: BootstrapScheme::Parametric, max_failure_rate: 0.2 }
    }
}

/// Source of bootstrap samples.
pub trait Resampler: Sync {
    fn resample(&self, rng: &mut StreamRng) -> CountSample;
}

pub struct ParametricResampler {
    sampler: ZmplSampler,
    n: usize,
}

impl ParametricResampler {
    pub fn new(params: ZmplParams, n: usize) -> Self {
        Self { sampler: ZmplSampler::new(params), n }
    }
}

impl Resampler for ParametricResampler {
    fn resample(&self, rng: &mut StreamRng) -> CountSample {
        self.sampler.sample(self.n, rng)
    }
}

pub struct NonparametricResampler<'a> {
    values: &'a [u64],
}

impl<'a> NonparametricResampler<'a> {
    pub fn new(sample: &'a CountSample) -> Self {
        Self { values: sample.values() }
    }
}

impl Resampler for NonparametricResampler<'_> {
    fn resample(&self, rng: &mut StreamRng) -> CountSample {
        let draws = (0..self.values.len())
            .map(|_| self.values[rng.gen_range(0..self.values.len())])
            .collect();
        CountSample::from_values(draws).expect("non-empty resample")
    }
}

/// Bootstrap replicate estimates around an original fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapRun {
    pub original: FitResult,
    /// `(theta*, pi*)` of every successful replicate, in replicate order.
    pub estimates: Vec<(f64, f64)>,
    pub failed: usize,
    pub requested: usize,
}

impl BootstrapRun {
    pub fn thetas(&self) -> Vec<f64> {
        self.estimates.iter().map(|e| e.0).collect()
    }

    pub fn pis(&self) -> Vec<f64> {
        self.estimates.iter().map(|e| e.1).collect()
    }

    /// `2 * estimate - mean(replicates)` for both parameters, projected onto
    /// the admissible region (flagged via `adjusted`).
    pub fn bias_corrected(&self, sample: &CountSample) -> Result<FitResult> {
        if self.estimates.is_empty() {
            return Err(Error::BootstrapFailures {
                failed: self.failed,
                requested: self.requested,
                limit: 0,
            });
        }
        let b = self.estimates.len() as f64;
        let mean_theta = self.estimates.iter().map(|e| e.0).sum::<f64>() / b;
        let mean_pi = self.estimates.iter().map(|e| e.1).sum::<f64>() / b;
        let raw_theta = 2.0 * self.original.theta - mean_theta;
        let raw_pi = 2.0 * self.original.pi - mean_pi;
        let (theta, pi, adjusted) = project_admissible(raw_theta, raw_pi);
        let params = ZmplParams::new(theta, pi)?;
        let summary = Summary::new(sample);
        let (d_t, d_p) = summary.partials(theta, pi);
        let (se_theta, se_pi) = if params.is_interior() {
            standard_errors(&params, sample.n())
        } else {
            (None, None)
        };
        Ok(FitResult {
            theta,
            pi,
            log_lik: summary.log_likelihood(theta, pi),
            se_theta,
            se_pi,
            method: Estimator::MleBiasCorrected,
            converged: self.original.converged,
            iterations: self.original.iterations,
            score_norm: d_t.hypot(d_p),
            boundary: self.original.boundary,
            adjusted,
        })
    }
}

/// Refits `config.replicates` resamples in parallel. Replicate `b` draws from
/// the stream `stream_prefix ++ [BOOTSTRAP, b]`, so results do not depend on
/// the number of worker threads. Replicates whose refit fails or runs to the
/// edge of the theta range are dropped and counted.
pub fn run_bootstrap(
    original: FitResult,
    resampler: &dyn Resampler,
    config: &BootstrapConfig,
    stream_prefix: &[u64],
) -> Result<BootstrapRun> {
    if config.replicates == 0 {
        return Err(Error::InvalidParameter("bootstrap needs at least one replicate".into()));
    }
    let opts = MleOptions { standard_errors: false, ..MleOptions::default() };
    let fits: Vec<Option<(f64, f64)>> = (0..config.replicates)
        .into_par_iter()
        .map(|b| {
            let mut path = stream_prefix.to_vec();
            path.extend([domain::BOOTSTRAP, b as u64]);
            let mut rng = stream(&path);
            let sample = resampler.resample(&mut rng);
            match mle_fit_with(&sample, &opts) {
                Ok(fit) if fit.converged && fit.boundary != Some(Boundary::ThetaLimit) => {
                    Some((fit.theta, fit.pi))
                }
                _ => None,
            }
        })
        .collect();
    let estimates: Vec<(f64, f64)> = fits.iter().flatten().copied().collect();
    let failed = config.replicates - estimates.len();
    let limit = (config.max_failure_rate * config.replicates as f64).floor() as usize;
    if failed > limit {
        return Err(Error::BootstrapFailures { failed, requested: config.replicates, limit });
    }
    Ok(BootstrapRun { original, estimates, failed, requested: config.replicates })
}

/// Fits the sample and bootstraps the fit under `config.scheme`.
pub fn bootstrap_replicates(sample: &CountSample, config: &BootstrapConfig) -> Result<BootstrapRun> {
    let original = mle_fit_with(sample, &MleOptions::default())?;
    match config.scheme {
        BootstrapScheme::Parametric => {
            let resampler = ParametricResampler::new(original.params(), sample.n() as usize);
            run_bootstrap(original, &resampler, config, &[config.seed])
        }
        BootstrapScheme::Nonparametric => {
            let resampler = NonparametricResampler::new(sample);
            run_bootstrap(original, &resampler, config, &[config.seed])
        }
    }
}

/// Bootstrap bias-corrected MLE.
pub fn bootstrap_bias_correct(sample: &CountSample, config: &BootstrapConfig) -> Result<FitResult> {
    bootstrap_replicates(sample, config)?.bias_corrected(sample)
}
