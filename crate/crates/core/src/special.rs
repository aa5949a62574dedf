//! Special functions: the Lerch transcendent needed by the ZMPL information
//! matrix, adaptive Gauss-Kronrod quadrature, and thin wrappers over the
//! normal quantile and chi-square tail.

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::gamma_ur;

use crate::{Error, Result};

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 60;

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    let (value, err) = kronrod15(f, a, b);
    if !value.is_finite() {
        return Err(Error::Numerical(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    if err <= tol || (b - a) <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Numerical(format!(
            "quadrature did not reach tolerance {tol:e} on [{a}, {b}]"
        )));
    }
    let mid = 0.5 * (a + b);
    Ok(adapt(f, a, mid, 0.5 * tol, depth + 1)? + adapt(f, mid, b, 0.5 * tol, depth + 1)?)
}

/// Integrates `f` over `[a, b]` by recursive bisection with the 7/15-point
/// Gauss-Kronrod pair, to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    adapt(&f, a, b, tol, 0)
}

/// Lerch transcendent `Phi(1/(theta+1), 1, theta)`, evaluated as
/// `1/theta + int_0^1 u^theta / (theta+1-u) du`.
///
/// The integrand is bounded (the denominator is at least `theta`), so plain
/// adaptive quadrature converges; the result is accurate to about 1e-12.
pub fn lerch_phi_theta(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")));
    }
    let a = theta + 1.0;
    let integral = if theta < 1.0 {
        // u = v^(1/a) removes the cusp of u^theta at the origin.
        integrate(|v: f64| 1.0 / (a * (a - v.powf(1.0 / a))), 0.0, 1.0, 1e-13)?
    } else {
        integrate(|u: f64| u.powf(theta) / (a - u), 0.0, 1.0, 1e-13)?
    };
    Ok(1.0 / theta + integral)
}

/// Upper `p` quantile of the standard normal, `z` with `P(Z > z) = p`.
pub fn normal_upper_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(1.0 - p)
}

/// Survival function of the chi-square distribution with `dof` degrees of
/// freedom, via the regularized upper incomplete gamma function.
pub fn chi_square_sf(statistic: f64, dof: usize) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    if dof == 0 {
        return 0.0;
    }
    gamma_ur(0.5 * dof as f64, 0.5 * statistic).clamp(0.0, 1.0)
}
