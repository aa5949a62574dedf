use serde::{Deserialize, Serialize};

use crate::distributions::{PlParams, ZmplParams};
use crate::special::lerch_phi_theta;
use crate::{Error, Result};

/// Expected Fisher information of `(theta, pi)` for a sample of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherInfo {
    pub i_tt: f64,
    pub i_tp: f64,
    pub i_pp: f64,
}

impl FisherInfo {
    pub fn determinant(&self) -> f64 {
        self.i_tt * self.i_pp - self.i_tp * self.i_tp
    }

    /// Eigenvalues, smallest first.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_trace = 0.5 * (self.i_tt + self.i_pp);
        let r = (0.5 * (self.i_tt - self.i_pp)).hypot(self.i_tp);
        (half_trace - r, half_trace + r)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.i_tt > 0.0 && self.determinant() > 0.0
    }

    /// Inverse as `[[v_tt, v_tp], [v_tp, v_pp]]`.
    pub fn inverse(&self) -> Result<[[f64; 2]; 2]> {
        let det = self.determinant();
        let scale = self.i_tt.abs() * self.i_pp.abs();
        if !det.is_finite() || det <= 1e-14 * scale || !(self.i_tt > 0.0) {
            return Err(Error::SingularInformation);
        }
        Ok([
            [self.i_pp / det, -self.i_tp / det],
            [-self.i_tp / det, self.i_tt / det],
        ])
    }

    /// Square roots of the diagonal of the inverse: `(se_theta, se_pi)`.
    pub fn standard_errors(&self) -> Result<(f64, f64)> {
        let v = self.inverse()?;
        Ok((v[0][0].sqrt(), v[1][1].sqrt()))
    }
}

/// Information of a zero-modified family with base zero probability `p0`,
/// its derivative `dp0` and per-observation base information `base_info`.
/// The first coordinate is the base parameter, the second is `pi`.
pub(crate) fn zero_modified_information(
    n: f64,
    pi: f64,
    p0: f64,
    dp0: f64,
    base_info: f64,
) -> FisherInfo {
    let z = pi + (1.0 - pi) * p0;
    let q = 1.0 - pi;
    FisherInfo {
        i_tt: n * (q * q * dp0 * dp0 / z + q * (base_info - dp0 * dp0 / p0)),
        i_tp: n * dp0 * (1.0 + (1.0 - p0) * q / z),
        i_pp: n * ((1.0 - p0) * (1.0 - p0) / z + (1.0 - z) / (q * q)),
    }
}

/// Per-observation Fisher information of the Poisson-Lindley distribution.
pub fn pl_unit_information(theta: f64) -> Result<f64> {
    let pl = PlParams::new(theta)?;
    let t = theta;
    let phi = lerch_phi_theta(t)?;
    let inv_sq = t * t / (t + 1.0) * (phi - 1.0 / t - 1.0 / ((t + 1.0) * (t + 1.0)));
    Ok(2.0 / (t * t) + inv_sq - (pl.mean() + 3.0) / ((t + 1.0) * (t + 1.0)))
}

/// Expected Fisher information of the zero-modified Poisson-Lindley model.
/// Fails on the boundary of the parameter space, where it is not defined.
pub fn expected_fisher_info(params: &ZmplParams, n: u64) -> Result<FisherInfo> {
    if !params.is_interior() {
        return Err(Error::Boundary(format!(
            "information undefined at pi = {} (theta = {})",
            params.pi(),
            params.theta()
        )));
    }
    let base = params.base();
    let info = zero_modified_information(
        n as f64,
        params.pi(),
        base.p0(),
        base.p0_derivative(),
        pl_unit_information(params.theta())?,
    );
    if info.i_tt.is_finite() && info.i_tp.is_finite() && info.i_pp.is_finite() {
        Ok(info)
    } else {
        Err(Error::Numerical("non-finite information".into()))
    }
}
