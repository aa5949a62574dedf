//! Moment and maximum-likelihood estimation of `(theta, pi)`, the expected
//! Fisher information, parametric bootstrap bias correction, and fits of the
//! baseline models.

mod bootstrap;
mod fisher;
mod likelihood;
mod mle;
mod models;
mod moments;

use serde::{Deserialize, Serialize};

use crate::distributions::ZmplParams;

pub use bootstrap::{
    bootstrap_bias_correct, bootstrap_replicates, run_bootstrap, BootstrapConfig, BootstrapRun,
    BootstrapScheme, NonparametricResampler, ParametricResampler, Resampler,
};
pub use fisher::{expected_fisher_info, pl_unit_information, FisherInfo};
pub use likelihood::{log_likelihood, profile_pi, score, Score};
pub use mle::{mle_fit, mle_fit_with, MleOptions};
pub use models::{fit_model, ModelFit, ModelKind, ParamEstimate};
pub use moments::moment_estimate;

/// How a [`FitResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Moments,
    Mle,
    MleBiasCorrected,
}

impl Estimator {
    pub fn as_str(&self) -> &'static str {
        match self {
            Estimator::Moments => "moments",
            Estimator::Mle => "mle",
            Estimator::MleBiasCorrected => "mle_bias_corrected",
        }
    }
}

/// Why an estimate is not an interior optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// No zeros observed: `pi` sits at its lower bound (zero-truncated PL).
    ZeroTruncated,
    /// The profile likelihood kept increasing up to the edge of the theta range.
    ThetaLimit,
}

/// Point estimate of `(theta, pi)` with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub theta: f64,
    pub pi: f64,
    pub log_lik: f64,
    /// Standard errors from the inverse expected information; `None` when the
    /// information is unavailable (boundary) or singular.
    pub se_theta: Option<f64>,
    pub se_pi: Option<f64>,
    pub method: Estimator,
    pub converged: bool,
    pub iterations: usize,
    /// Euclidean norm of the score at the estimate.
    pub score_norm: f64,
    pub boundary: Option<Boundary>,
    /// The raw estimate fell outside the admissible region and was projected.
    pub adjusted: bool,
}

impl FitResult {
    pub fn params(&self) -> ZmplParams {
        ZmplParams::new(self.theta, self.pi).expect("fit results are admissible")
    }
}

/// Smallest and largest theta explored by the optimizer.
pub const THETA_RANGE: (f64, f64) = (1e-4, 1e4);

pub(crate) fn project_admissible(theta: f64, pi: f64) -> (f64, f64, bool) {
    let t = if theta.is_finite() { theta.clamp(THETA_RANGE.0, THETA_RANGE.1) } else { THETA_RANGE.1 };
    let lower = crate::distributions::pi_lower_bound(t).expect("positive theta");
    let p = if pi.is_nan() { 0.0 } else { pi.clamp(lower, 1.0) };
    (t, p, t != theta || p != pi)
}

pub(crate) fn standard_errors(params: &ZmplParams, n: u64) -> (Option<f64>, Option<f64>) {
    expected_fisher_info(params, n)
        .and_then(|info| info.standard_errors())
        .map(|(a, b)| (Some(a), Some(b)))
        .unwrap_or((None, None))
}
