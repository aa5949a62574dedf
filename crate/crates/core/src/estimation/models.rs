use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::fisher::{pl_unit_information, zero_modified_information};
use super::{mle_fit, FitResult};
use crate::distributions::{CountModel, CountSample, PlParams, ZmpParams};
use crate::optim::brent_root;
use crate::{Error, Result};

/// The four count models that can be fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Poisson,
    Zmp,
    Pl,
    Zmpl,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::Poisson, ModelKind::Zmp, ModelKind::Pl, ModelKind::Zmpl];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Poisson => "poisson",
            ModelKind::Zmp => "zmp",
            ModelKind::Pl => "pl",
            ModelKind::Zmpl => "zmpl",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "poisson" => Ok(ModelKind::Poisson),
            "zmp" => Ok(ModelKind::Zmp),
            "pl" => Ok(ModelKind::Pl),
            "zmpl" => Ok(ModelKind::Zmpl),
            other => Err(Error::InvalidParameter(format!(
                "unknown model '{other}' (expected poisson, zmp, pl or zmpl)"
            ))),
        }
    }
}

/// A named parameter estimate with its asymptotic standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamEstimate {
    pub name: &'static str,
    pub value: f64,
    pub se: Option<f64>,
}

/// Maximum-likelihood fit of any of the four models.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelFit {
    pub kind: ModelKind,
    pub model: CountModel,
    pub estimates: Vec<ParamEstimate>,
    pub log_lik: f64,
    /// Full result for the ZMPL model.
    pub zmpl: Option<FitResult>,
}

impl ModelFit {
    pub fn estimate(&self, name: &str) -> Option<&ParamEstimate> {
        self.estimates.iter().find(|e| e.name == name)
    }
}

fn log_lik(model: &CountModel, sample: &CountSample) -> f64 {
    sample.freq().iter().map(|(&k, &f)| f as f64 * model.pmf(k).ln()).sum()
}

fn est(name: &'static str, value: f64, se: Option<f64>) -> ParamEstimate {
    ParamEstimate { name, value, se }
}

fn fit_poisson(sample: &CountSample) -> Result<ModelFit> {
    let lambda = sample.mean();
    if !(lambda > 0.0) {
        return Err(Error::DegenerateSample("Poisson fit needs a positive observation".into()));
    }
    let model = CountModel::Poisson { lambda };
    let se = (lambda / sample.n() as f64).sqrt();
    Ok(ModelFit {
        kind: ModelKind::Poisson,
        log_lik: log_lik(&model, sample),
        model,
        estimates: vec![est("lambda", lambda, Some(se))],
        zmpl: None,
    })
}

fn fit_zmp(sample: &CountSample) -> Result<ModelFit> {
    let n = sample.n() as f64;
    let n_pos = n - sample.n0() as f64;
    let positive_mean = sample.mean() * n / n_pos;
    if !(n_pos > 0.0 && positive_mean > 1.0) {
        return Err(Error::DegenerateSample(
            "zero-modified Poisson fit needs an observation above 1".into(),
        ));
    }
    // lambda / (1 - exp(-lambda)) equals the mean of the positive observations.
    let g = |l: f64| l / -(-l).exp_m1() - positive_mean;
    let root = brent_root(g, 1e-12, positive_mean, 1e-14, 200)
        .filter(|r| r.converged)
        .ok_or_else(|| Error::Numerical("zero-modified Poisson equation has no root".into()))?;
    let lambda = root.x;
    let q = (-lambda).exp();
    let pi = 1.0 - (n_pos / n) / -(-lambda).exp_m1();
    let params = ZmpParams::new(lambda, pi.max(ZmpParams::pi_lower_bound(lambda)))?;
    let info = zero_modified_information(n, params.pi(), q, -q, 1.0 / lambda);
    let (se_l, se_p) = info.standard_errors().map(|(a, b)| (Some(a), Some(b))).unwrap_or((None, None));
    let model = CountModel::Zmp(params);
    Ok(ModelFit {
        kind: ModelKind::Zmp,
        log_lik: log_lik(&model, sample),
        model,
        estimates: vec![est("lambda", lambda, se_l), est("pi", params.pi(), se_p)],
        zmpl: None,
    })
}

fn fit_pl(sample: &CountSample) -> Result<ModelFit> {
    let n = sample.n() as f64;
    let total = sample.mean() * n;
    if !(total > 0.0) {
        return Err(Error::DegenerateSample("Poisson-Lindley fit needs a positive observation".into()));
    }
    let cells: Vec<(f64, f64)> = sample.freq().iter().map(|(&k, &f)| (k as f64, f as f64)).collect();
    let score = |t: f64| {
        2.0 * n / t + cells.iter().map(|(k, f)| f / (k + t + 2.0)).sum::<f64>()
            - (total + 3.0 * n) / (t + 1.0)
    };
    let mut hi = 1.0;
    while score(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::Numerical("Poisson-Lindley score has no root".into()));
        }
    }
    let root = brent_root(score, 1e-10, hi, 1e-14, 200)
        .filter(|r| r.converged)
        .ok_or_else(|| Error::Numerical("Poisson-Lindley score has no root".into()))?;
    let theta = root.x;
    let se = pl_unit_information(theta).ok().map(|i| (1.0 / (n * i)).sqrt());
    let model = CountModel::Pl(PlParams::new(theta)?);
    Ok(ModelFit {
        kind: ModelKind::Pl,
        log_lik: log_lik(&model, sample),
        model,
        estimates: vec![est("theta", theta, se)],
        zmpl: None,
    })
}

fn fit_zmpl(sample: &CountSample) -> Result<ModelFit> {
    let fit = mle_fit(sample)?;
    Ok(ModelFit {
        kind: ModelKind::Zmpl,
        model: CountModel::Zmpl(fit.params()),
        estimates: vec![est("theta", fit.theta, fit.se_theta), est("pi", fit.pi, fit.se_pi)],
        log_lik: fit.log_lik,
        zmpl: Some(fit),
    })
}

/// Maximum-likelihood fit of `kind` to the sample.
pub fn fit_model(kind: ModelKind, sample: &CountSample) -> Result<ModelFit> {
    match kind {
        ModelKind::Poisson => fit_poisson(sample),
        ModelKind::Zmp => fit_zmp(sample),
        ModelKind::Pl => fit_pl(sample),
        ModelKind::Zmpl => fit_zmpl(sample),
    }
}
