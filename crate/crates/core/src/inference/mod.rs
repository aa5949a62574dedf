//! Confidence intervals, the gradient test of `pi = 0`, chi-square
//! goodness of fit and standardized differences for SD plots.

mod gof;
mod gradient;
mod intervals;
mod sdplot;

pub use gof::{
    chi_square_gof, expected_frequencies, goodness_of_fit, CellLayout, DofConvention, GofCell,
    GofReport,
};
pub use gradient::{gradient_test, GradientTestResult};
pub use intervals::{
    asymptotic_ci, percentile_ci, percentile_ci_from_run, percentile_ranks, wald_interval,
    IntervalEstimate, IntervalMethod, Parameter,
};
pub use sdplot::{standardized_differences, SdNorm, SdPlotData, SdPoint};
