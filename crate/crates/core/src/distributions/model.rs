use std::fmt;

use serde::{Deserialize, Serialize};

use super::poisson::poisson_pmf_unchecked;
use super::{PlParams, ZmpParams, ZmplParams};

/// A fitted count distribution of one of the four supported families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum CountModel {
    Poisson { lambda: f64 },
    Zmp(ZmpParams),
    Pl(PlParams),
    Zmpl(ZmplParams),
}

impl CountModel {
    pub fn pmf(&self, k: u64) -> f64 {
        match self {
            CountModel::Poisson { lambda } => poisson_pmf_unchecked(*lambda, k),
            CountModel::Zmp(p) => p.pmf(k),
            CountModel::Pl(p) => p.pmf(k),
            CountModel::Zmpl(p) => p.pmf(k),
        }
    }

    /// `P(X >= k)`.
    pub fn tail_from(&self, k: u64) -> f64 {
        match self {
            CountModel::Zmpl(p) => p.survival(k as f64),
            CountModel::Pl(p) if k > 0 => p.upper_tail(k - 1),
            _ => (1.0 - (0..k).map(|j| self.pmf(j)).sum::<f64>()).max(0.0),
        }
    }

    pub fn n_params(&self) -> usize {
        match self {
            CountModel::Poisson { .. } | CountModel::Pl(_) => 1,
            CountModel::Zmp(_) | CountModel::Zmpl(_) => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CountModel::Poisson { .. } => "poisson",
            CountModel::Zmp(_) => "zmp",
            CountModel::Pl(_) => "pl",
            CountModel::Zmpl(_) => "zmpl",
        }
    }
}

impl fmt::Display for CountModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountModel::Poisson { lambda } => write!(f, "Poisson(lambda={lambda:.4})"),
            CountModel::Zmp(p) => write!(f, "ZMP(lambda={:.4}, pi={:.4})", p.lambda(), p.pi()),
            CountModel::Pl(p) => write!(f, "PL(theta={:.4})", p.theta()),
            CountModel::Zmpl(p) => write!(f, "ZMPL(theta={:.4}, pi={:.4})", p.theta(), p.pi()),
        }
    }
}
