use super::likelihood::Summary;
use super::{project_admissible, standard_errors, Estimator, FitResult};
use crate::distributions::{CountSample, ZmplParams};
use crate::{Error, Result};

/// Method-of-moments theta from the sample mean `m` and mean of squares `s`.
pub(crate) fn moment_theta(m: f64, s: f64) -> Result<f64> {
    let gap = s - m;
    if !(gap > 0.0) || !(m > 0.0) {
        return Err(Error::DegenerateSample(
            "moment equations need at least one observation above 1".into(),
        ));
    }
    let root = (s * s + 2.0 * m * gap).sqrt();
    // Two algebraically equal forms; pick the one without cancellation.
    let theta = if s >= 2.0 * m {
        6.0 * m / (root + s - 2.0 * m)
    } else {
        (2.0 * m - s + root) / gap
    };
    if theta.is_finite() && theta > 0.0 {
        Ok(theta)
    } else {
        Err(Error::Numerical(format!("moment estimate of theta is {theta}")))
    }
}

/// Method-of-moments estimate. A `pi` outside its admissible interval is
/// projected onto it and flagged via [`FitResult::adjusted`].
pub fn moment_estimate(sample: &CountSample) -> Result<FitResult> {
    if sample.is_degenerate() {
        return Err(Error::DegenerateSample("all observations are 0 or 1".into()));
    }
    let m = sample.mean();
    let theta = moment_theta(m, sample.mean_of_squares())?;
    let pi = 1.0 - theta * (theta + 1.0) * m / (theta + 2.0);
    let (theta, pi, adjusted) = project_admissible(theta, pi);
    let params = ZmplParams::new(theta, pi)?;
    let summary = Summary::new(sample);
    let log_lik = summary.log_likelihood(theta, pi);
    let (d_t, d_p) = summary.partials(theta, pi);
    let (se_theta, se_pi) = if params.is_interior() {
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
        method: Estimator::Moments,
        converged: true,
        iterations: 0,
        score_norm: d_t.hypot(d_p),
        boundary: None,
        adjusted,
    })
}
