use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::McScenario;
use crate::estimation::Estimator;
use crate::inference::{IntervalMethod, Parameter};
use crate::{Error, Result};

pub const POINT_COLUMNS: [&str; 12] = [
    "scenario_id", "n", "theta_true", "pi_true", "estimator", "parameter", "mean", "bias",
    "variance", "mse", "mc_se", "failures",
];

pub const COVERAGE_COLUMNS: [&str; 11] = [
    "scenario_id", "n", "theta_true", "pi_true", "method", "parameter", "level", "coverage",
    "left_tail", "right_tail", "mc_se",
];

/// One estimator/parameter cell of the point study. `mc_se` is the Monte
/// Carlo standard error of `mse`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub scenario_id: String,
    pub n: usize,
    pub theta_true: f64,
    pub pi_true: f64,
    pub estimator: Estimator,
    pub parameter: Parameter,
    pub mean: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    pub mc_se: f64,
    pub failures: usize,
}

/// One method/parameter/level cell of the coverage study. `mc_se` is the
/// binomial standard error of `coverage`, floored at `1/m` for `m`
/// successful replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub scenario_id: String,
    pub n: usize,
    pub theta_true: f64,
    pub pi_true: f64,
    pub method: IntervalMethod,
    pub parameter: Parameter,
    pub level: f64,
    pub coverage: f64,
    pub left_tail: f64,
    pub right_tail: f64,
    pub mc_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McPointReport {
    pub scenario: McScenario,
    pub rows: Vec<PointRow>,
}

impl McPointReport {
    pub fn row(&self, estimator: Estimator, parameter: Parameter) -> Option<&PointRow> {
        self.rows.iter().find(|r| r.estimator == estimator && r.parameter == parameter)
    }

    /// Monte Carlo standard error of the bias (and mean) of a cell.
    pub fn bias_se(&self, estimator: Estimator, parameter: Parameter) -> Option<f64> {
        let row = self.row(estimator, parameter)?;
        let m = (self.scenario.mc_reps - row.failures) as f64;
        Some((row.variance / m).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCoverageReport {
    pub scenario: McScenario,
    pub rows: Vec<CoverageRow>,
    /// Replicates without an interval, per method and level in row order
    /// (asymptotic levels first, then percentile levels).
    pub failures: Vec<usize>,
}

impl McCoverageReport {
    pub fn row(&self, method: IntervalMethod, parameter: Parameter, level: f64) -> Option<&CoverageRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.parameter == parameter && (r.level - level).abs() < 1e-12)
    }
}

fn to_csv<T: Serialize>(header: &[&str], rows: impl Iterator<Item = T>) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

fn from_csv<T: for<'de> Deserialize<'de>>(header: &[&str], text: &str) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let found = r.headers().map_err(|e| Error::Data(e.to_string()))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Data(format!("unexpected CSV header: {}", found.iter().collect::<Vec<_>>().join(","))));
    }
    r.deserialize().map(|row| row.map_err(|e| Error::Data(e.to_string()))).collect()
}

pub fn render_point_csv(reports: &[McPointReport]) -> String {
    to_csv(&POINT_COLUMNS, reports.iter().flat_map(|r| r.rows.iter()))
}

pub fn parse_point_csv(text: &str) -> Result<Vec<PointRow>> {
    from_csv(&POINT_COLUMNS, text)
}

pub fn render_coverage_csv(reports: &[McCoverageReport]) -> String {
    to_csv(&COVERAGE_COLUMNS, reports.iter().flat_map(|r| r.rows.iter()))
}

pub fn parse_coverage_csv(text: &str) -> Result<Vec<CoverageRow>> {
    from_csv(&COVERAGE_COLUMNS, text)
}

pub fn render_point_table(reports: &[McPointReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:<20} {:<6} {:>9} {:>9} {:>9} {:>9} {:>9} {:>6}",
        "scenario", "estimator", "param", "mean", "bias", "variance", "mse", "mc_se", "fail"
    );
    for row in reports.iter().flat_map(|r| r.rows.iter()) {
        let _ = writeln!(
            out,
            "{:<18} {:<20} {:<6} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>6}",
            row.scenario_id,
            row.estimator.as_str(),
            row.parameter.as_str(),
            row.mean,
            row.bias,
            row.variance,
            row.mse,
            row.mc_se,
            row.failures
        );
    }
    out
}

pub fn render_coverage_table(reports: &[McCoverageReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:<6} {:<6} {:>6} {:>9} {:>9} {:>9} {:>9}",
        "scenario", "method", "param", "level", "coverage", "left", "right", "mc_se"
    );
    for row in reports.iter().flat_map(|r| r.rows.iter()) {
        let _ = writeln!(
            out,
            "{:<18} {:<6} {:<6} {:>6.2} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            row.scenario_id,
            row.method.as_str(),
            row.parameter.as_str(),
            row.level,
            row.coverage,
            row.left_tail,
            row.right_tail,
            row.mc_se
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::{run_study, DEFAULT_LEVELS};

    #[test]
    fn empty_report_list_is_header_only() {
        assert_eq!(render_point_csv(&[]), format!("{}\n", POINT_COLUMNS.join(",")));
        assert_eq!(render_coverage_csv(&[]), format!("{}\n", COVERAGE_COLUMNS.join(",")));
    }

    #[test]
    fn csv_round_trip() {
        let scenario = McScenario::new(35, 1.5, -0.1, 8, 10, 5).unwrap();
        let (point, cov) = run_study(&scenario, &DEFAULT_LEVELS).unwrap();
        let text = render_point_csv(std::slice::from_ref(&point));
        assert_eq!(parse_point_csv(&text).unwrap(), point.rows);
        let text = render_coverage_csv(std::slice::from_ref(&cov));
        assert_eq!(parse_coverage_csv(&text).unwrap(), cov.rows);
        assert!(text.lines().nth(1).unwrap().starts_with("n35_t1.5_p-0.1,35,1.5,-0.1,asymptotic,theta,0.9,"));
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(parse_point_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn tables_have_one_line_per_row() {
        let scenario = McScenario::new(35, 2.0, 0.0, 4, 5, 5).unwrap();
        let (point, cov) = run_study(&scenario, &[0.95]).unwrap();
        assert_eq!(render_point_table(&[point]).lines().count(), 5);
        assert_eq!(render_coverage_table(&[cov]).lines().count(), 5);
    }
}
