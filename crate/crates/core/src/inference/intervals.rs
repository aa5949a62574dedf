use std::fmt;

use serde::{Deserialize, Serialize};

use crate::estimation::{bootstrap_replicates, BootstrapConfig, BootstrapRun, FisherInfo, FitResult};
use crate::special::normal_upper_quantile;
use crate::distributions::CountSample;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Theta,
    Pi,
}

impl Parameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parameter::Theta => "theta",
            Parameter::Pi => "pi",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalMethod {
    Asymptotic,
    Percentile,
}

impl IntervalMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntervalMethod::Asymptotic => "aci",
            IntervalMethod::Percentile => "pci",
        }
    }
}

/// A two-sided interval at nominal coverage `level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalEstimate {
    pub parameter: Parameter,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: IntervalMethod,
}

impl IntervalEstimate {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("level must be in (0, 1), got {level}")))
    }
}

/// `estimate -/+ z_{alpha/2} * se`.
pub fn wald_interval(estimate: f64, se: f64, level: f64) -> Result<(f64, f64)> {
    check_level(level)?;
    if !(se >= 0.0 && se.is_finite()) {
        return Err(Error::Numerical(format!("invalid standard error {se}")));
    }
    let half = normal_upper_quantile(0.5 * (1.0 - level)) * se;
    Ok((estimate - half, estimate + half))
}

/// Asymptotic intervals for theta and pi from the inverse information.
pub fn asymptotic_ci(
    fit: &FitResult,
    info: &FisherInfo,
    level: f64,
) -> Result<(IntervalEstimate, IntervalEstimate)> {
    check_level(level)?;
    if !fit.converged {
        return Err(Error::Numerical("fit did not converge".into()));
    }
    let (se_theta, se_pi) = info.standard_errors()?;
    let make = |parameter, estimate, se| -> Result<IntervalEstimate> {
        let (lower, upper) = wald_interval(estimate, se, level)?;
        Ok(IntervalEstimate { parameter, estimate, lower, upper, level, method: IntervalMethod::Asymptotic })
    };
    Ok((make(Parameter::Theta, fit.theta, se_theta)?, make(Parameter::Pi, fit.pi, se_pi)?))
}

/// One-based ranks of the order statistics used as percentile limits for
/// `b` replicates: the integer parts of `b * alpha/2` and `b * (1 - alpha/2)`,
/// kept within `1..=b`.
pub fn percentile_ranks(b: usize, level: f64) -> (usize, usize) {
    let alpha = 1.0 - level;
    let bf = b as f64;
    let lo = (bf * alpha / 2.0 + 1e-9).floor() as usize;
    let hi = (bf * (1.0 - alpha / 2.0) + 1e-9).floor() as usize;
    (lo.clamp(1, b), hi.clamp(1, b))
}

fn order_interval(values: &[f64], level: f64) -> (f64, f64) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (lo, hi) = percentile_ranks(sorted.len(), level);
    (sorted[lo - 1], sorted[hi - 1])
}

/// Percentile intervals from existing bootstrap replicates.
pub fn percentile_ci_from_run(
    run: &BootstrapRun,
    level: f64,
) -> Result<(IntervalEstimate, IntervalEstimate)> {
    check_level(level)?;
    if run.estimates.is_empty() {
        return Err(Error::BootstrapFailures { failed: run.failed, requested: run.requested, limit: 0 });
    }
    let make = |parameter, estimate, values: Vec<f64>| {
        let (lower, upper) = order_interval(&values, level);
        IntervalEstimate { parameter, estimate, lower, upper, level, method: IntervalMethod::Percentile }
    };
    Ok((
        make(Parameter::Theta, run.original.theta, run.thetas()),
        make(Parameter::Pi, run.original.pi, run.pis()),
    ))
}

/// Bootstraps the sample and returns percentile intervals.
pub fn percentile_ci(
    sample: &CountSample,
    config: &BootstrapConfig,
    level: f64,
) -> Result<(IntervalEstimate, IntervalEstimate)> {
    check_level(level)?;
    percentile_ci_from_run(&bootstrap_replicates(sample, config)?, level)
}
