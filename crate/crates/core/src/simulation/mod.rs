//! Monte Carlo harness for the sampling properties of the estimators: bias
//! and MSE of the MLE and its bootstrap bias correction, and empirical
//! coverage of asymptotic and percentile intervals.

mod report;
mod scenario;
mod study;

pub use report::{
    parse_coverage_csv, parse_point_csv, render_coverage_csv, render_coverage_table,
    render_point_csv, render_point_table, CoverageRow, McCoverageReport, McPointReport, PointRow,
    COVERAGE_COLUMNS, POINT_COLUMNS,
};
pub use scenario::{expand_grid, paper_grid, McScenario, PAPER_PIS, PAPER_SAMPLE_SIZES, PAPER_THETAS};
pub use study::{
    run_coverage_study, run_coverage_study_with, run_point_study, run_point_study_with, run_study,
    IntervalBuilder, SampleSource, StandardIntervals, ZmplSource, DEFAULT_LEVELS, REDRAW_CAP,
};
