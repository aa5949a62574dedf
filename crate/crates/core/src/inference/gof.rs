use serde::{Deserialize, Serialize};

use crate::distributions::{CountModel, CountSample};
use crate::special::chi_square_sf;
use crate::{Error, Result};

/// Treatment of the last goodness-of-fit cell `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellLayout {
    /// The last cell is `>= K` with expected frequency `n * P(X >= K)`, so
    /// expected frequencies sum to `n`.
    #[default]
    Closed,
    /// Every cell, including the last, uses `n * pmf(k)`.
    Open,
}

/// Degrees of freedom of the chi-square reference distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DofConvention {
    /// `cells - 1`.
    #[default]
    CellsMinusOne,
    /// `cells - 1 - number of estimated parameters`.
    CellsMinusOneMinusParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofCell {
    pub label: String,
    pub observed: u64,
    pub expected: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub cells: Vec<GofCell>,
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Expected frequencies of `model` over the cells `0..=max_k`.
pub fn expected_frequencies(model: &CountModel, n: u64, max_k: u64, layout: CellLayout) -> Vec<f64> {
    let n = n as f64;
    let mut out: Vec<f64> = (0..=max_k).map(|k| n * model.pmf(k)).collect();
    if layout == CellLayout::Closed {
        out[max_k as usize] = n * model.tail_from(max_k);
    }
    out
}

/// Pearson statistic `sum (O - E)^2 / E` over aligned cells labelled
/// `0, 1, ...`.
pub fn chi_square_gof(
    observed: &[u64],
    expected: &[f64],
    n_params: usize,
    convention: DofConvention,
) -> Result<GofReport> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "{} observed cells but {} expected cells",
            observed.len(),
            expected.len()
        )));
    }
    if let Some(k) = expected.iter().position(|&e| !(e > 0.0)) {
        return Err(Error::Numerical(format!("expected frequency of cell {k} is {}", expected[k])));
    }
    let cells: Vec<GofCell> = observed
        .iter()
        .zip(expected)
        .enumerate()
        .map(|(k, (&o, &e))| GofCell {
            label: k.to_string(),
            observed: o,
            expected: e,
            contribution: (o as f64 - e).powi(2) / e,
        })
        .collect();
    let chi_square = cells.iter().map(|c| c.contribution).sum();
    let reduce = match convention {
        DofConvention::CellsMinusOne => 1,
        DofConvention::CellsMinusOneMinusParams => 1 + n_params,
    };
    if cells.len() <= reduce {
        return Err(Error::InvalidParameter(format!(
            "{} cells leave no degrees of freedom",
            cells.len()
        )));
    }
    let dof = cells.len() - reduce;
    Ok(GofReport { cells, chi_square, dof, p_value: chi_square_sf(chi_square, dof) })
}

/// Goodness of fit of `model` on the cells `0..=max(sample)`. Under the
/// closed layout the last cell is labelled `>=K`.
pub fn goodness_of_fit(
    model: &CountModel,
    sample: &CountSample,
    layout: CellLayout,
    convention: DofConvention,
) -> Result<GofReport> {
    let max_k = sample.max();
    let observed = sample.cell_counts(max_k, true);
    let expected = expected_frequencies(model, sample.n(), max_k, layout);
    let mut report = chi_square_gof(&observed, &expected, model.n_params(), convention)?;
    if layout == CellLayout::Closed || sample.open_tail().is_some() {
        if let Some(last) = report.cells.last_mut() {
            last.label = format!(">={max_k}");
        }
    }
    Ok(report)
}
