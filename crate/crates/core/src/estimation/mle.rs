use super::likelihood::Summary;
use super::moments::moment_theta;
use super::{standard_errors, Boundary, Estimator, FitResult, THETA_RANGE};
use crate::distributions::{CountSample, ZmplParams};
use crate::optim::{brent_minimize, brent_root};
use crate::{Error, Result};

/// Controls for [`mle_fit_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleOptions {
    /// Absolute tolerance of the profile-likelihood search in theta.
    pub tol: f64,
    pub max_iter: usize,
    /// Skip the standard errors (faster inside resampling loops).
    pub standard_errors: bool,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 500, standard_errors: true }
    }
}

/// Maximum-likelihood estimate of `(theta, pi)` with default options.
pub fn mle_fit(sample: &CountSample) -> Result<FitResult> {
    mle_fit_with(sample, &MleOptions::default())
}

/// Maximizes the profile likelihood `l(theta, pi_hat(theta))`, where
/// `pi_hat` is the closed-form maximizer in `pi`. The search starts from the
/// moment estimate of theta, expands a bracket geometrically inside
/// [`THETA_RANGE`], runs Brent's method, and finally solves the profile
/// score equation to full precision.
pub fn mle_fit_with(sample: &CountSample, opts: &MleOptions) -> Result<FitResult> {
    if sample.is_degenerate() {
        return Err(Error::DegenerateSample("all observations are 0 or 1".into()));
    }
    let summary = Summary::new(sample);
    let (lo, hi) = THETA_RANGE;
    let neg_profile = |t: f64| -summary.log_likelihood(t, summary.profile_pi(t));

    let start = moment_theta(sample.mean(), sample.mean_of_squares())
        .unwrap_or(1.0)
        .clamp(2.0 * lo, 0.5 * hi);
    let (mut a, mut m, mut b) = ((0.5 * start).max(lo), start, (2.0 * start).min(hi));
    let (mut fa, mut fm, mut fb) = (neg_profile(a), neg_profile(m), neg_profile(b));
    let mut evaluations = 3;
    while !(fm <= fa && fm <= fb) {
        if fa < fm {
            if a <= lo {
                break;
            }
            (b, fb, m, fm) = (m, fm, a, fa);
            a = (0.5 * a).max(lo);
            fa = neg_profile(a);
        } else {
            if b >= hi {
                break;
            }
            (a, fa, m, fm) = (m, fm, b, fb);
            b = (2.0 * b).min(hi);
            fb = neg_profile(b);
        }
        evaluations += 1;
        if evaluations > opts.max_iter {
            return Err(Error::Numerical("could not bracket the likelihood maximum".into()));
        }
    }
    let _ = (fa, fb);

    let search = brent_minimize(neg_profile, a, b, opts.tol, opts.max_iter);
    let mut theta = search.x;
    let mut iterations = search.iterations + evaluations;

    let profile_score = |t: f64| {
        let pi = summary.profile_pi(t);
        let (d_t, d_p) = summary.partials(t, pi);
        if summary.n0 > 0.0 {
            d_t
        } else {
            let dt = 1e-6 * t;
            let slope = (summary.profile_pi(t + dt) - summary.profile_pi(t - dt)) / (2.0 * dt);
            d_t + d_p * slope
        }
    };
    let h = 1e-5 * (1.0 + theta);
    let (pa, pb) = ((theta - h).max(lo), (theta + h).min(hi));
    if let Some(root) = brent_root(profile_score, pa, pb, 1e-15 * (1.0 + theta), 100) {
        if root.converged && -neg_profile(root.x) >= -neg_profile(theta) - 1e-9 {
            theta = root.x;
            iterations += root.iterations;
        }
    }

    let boundary = if theta <= lo * (1.0 + 1e-6) || theta >= hi * (1.0 - 1e-6) {
        Some(Boundary::ThetaLimit)
    } else if sample.n0() == 0 {
        Some(Boundary::ZeroTruncated)
    } else {
        None
    };
    let pi = summary.profile_pi(theta);
    let params = ZmplParams::new(theta, pi)?;
    let log_lik = summary.log_likelihood(theta, pi);
    if !log_lik.is_finite() {
        return Err(Error::Numerical(format!("log-likelihood is {log_lik} at the optimum")));
    }
    let (d_t, d_p) = summary.partials(theta, pi);
    let (se_theta, se_pi) = if opts.standard_errors && boundary.is_none() && params.is_interior() {
        standard_errors(&params, sample.n())
    } else {
        (None, None)
    };
    Ok(FitResult {
        theta,
        pi,
        log_lik,
        se_theta,
        se_pi,
        method: Estimator::Mle,
        converged: search.converged,
        iterations,
        score_norm: d_t.hypot(d_p),
        boundary,
        adjusted: false,
    })
}
