use rayon::prelude::*;

use super::report::{CoverageRow, McCoverageReport, McPointReport, PointRow};
use super::McScenario;
use crate::distributions::{CountSample, ZmplSampler};
use crate::estimation::{
    expected_fisher_info, mle_fit_with, run_bootstrap, Boundary, BootstrapConfig, BootstrapRun,
    Estimator, FitResult, MleOptions, ParametricResampler,
};
use crate::inference::{asymptotic_ci, percentile_ci_from_run, IntervalEstimate, IntervalMethod, Parameter};
use crate::rng::{domain, stream, StreamRng};
use crate::{Error, Result};

/// Largest number of redraws of a degenerate sample within one replicate.
pub const REDRAW_CAP: usize = 100;

/// Nominal levels of the coverage study.
pub const DEFAULT_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];

const METHODS: [IntervalMethod; 2] = [IntervalMethod::Asymptotic, IntervalMethod::Percentile];
const PARAMETERS: [Parameter; 2] = [Parameter::Theta, Parameter::Pi];

/// Source of Monte Carlo samples.
pub trait SampleSource: Sync {
    fn draw(&self, rng: &mut StreamRng) -> CountSample;
}

/// Samples of size `n` from the scenario's true ZMPL distribution.
pub struct ZmplSource {
    sampler: ZmplSampler,
    n: usize,
}

impl ZmplSource {
    pub fn new(scenario: &McScenario) -> Result<Self> {
        Ok(Self { sampler: ZmplSampler::new(scenario.params()?), n: scenario.n })
    }
}

impl SampleSource for ZmplSource {
    fn draw(&self, rng: &mut StreamRng) -> CountSample {
        self.sampler.sample(self.n, rng)
    }
}

/// Builds the `(theta, pi)` intervals of one method for one replicate;
/// `None` marks a failure.
pub trait IntervalBuilder: Sync {
    fn build(
        &self,
        method: IntervalMethod,
        level: f64,
        sample: &CountSample,
        fit: &FitResult,
        boot: &BootstrapRun,
    ) -> Option<(IntervalEstimate, IntervalEstimate)>;
}

/// Asymptotic intervals from the expected information at the MLE and
/// percentile intervals from the replicate's bootstrap run.
pub struct StandardIntervals;

impl IntervalBuilder for StandardIntervals {
    fn build(
        &self,
        method: IntervalMethod,
        level: f64,
        sample: &CountSample,
        fit: &FitResult,
        boot: &BootstrapRun,
    ) -> Option<(IntervalEstimate, IntervalEstimate)> {
        match method {
            IntervalMethod::Asymptotic => {
                let info = expected_fisher_info(&fit.params(), sample.n()).ok()?;
                asymptotic_ci(fit, &info, level).ok()
            }
            IntervalMethod::Percentile => percentile_ci_from_run(boot, level).ok(),
        }
    }
}

struct Outcome {
    mle: Option<(f64, f64)>,
    bc: Option<(f64, f64)>,
    /// Indexed by `method * levels + level`.
    intervals: Vec<Option<(IntervalEstimate, IntervalEstimate)>>,
}

fn draw_valid(
    scenario: &McScenario,
    source: &dyn SampleSource,
    r: usize,
) -> Result<CountSample> {
    for attempt in 0..=REDRAW_CAP {
        let mut rng = stream(&[
            scenario.seed,
            scenario.stream_key(),
            domain::SAMPLE,
            r as u64,
            attempt as u64,
        ]);
        let sample = source.draw(&mut rng);
        if !sample.is_degenerate() {
            return Ok(sample);
        }
    }
    Err(Error::DegenerateSample(format!(
        "replicate {r} of {} drew {} degenerate samples in a row",
        scenario.id(),
        REDRAW_CAP + 1
    )))
}

fn replicate(
    scenario: &McScenario,
    levels: &[f64],
    source: &dyn SampleSource,
    intervals: Option<&dyn IntervalBuilder>,
    r: usize,
) -> Result<Outcome> {
    let slots = if intervals.is_some() { METHODS.len() * levels.len() } else { 0 };
    let sample = draw_valid(scenario, source, r)?;
    let failed = Outcome { mle: None, bc: None, intervals: vec![None; slots] };
    let fit = match mle_fit_with(&sample, &MleOptions { standard_errors: false, ..Default::default() }) {
        Ok(f) if f.converged && f.boundary != Some(Boundary::ThetaLimit) => f,
        _ => return Ok(failed),
    };
    let config = BootstrapConfig { replicates: scenario.boot_reps, seed: scenario.seed, ..Default::default() };
    let resampler = ParametricResampler::new(fit.params(), sample.n() as usize);
    let boot = run_bootstrap(fit, &resampler, &config, &[scenario.seed, scenario.stream_key(), r as u64]);
    let bc = boot.as_ref().ok().and_then(|b| b.bias_corrected(&sample).ok()).map(|f| (f.theta, f.pi));
    let mut out = Outcome { mle: Some((fit.theta, fit.pi)), bc, intervals: Vec::with_capacity(slots) };
    if let Some(builder) = intervals {
        for method in METHODS {
            for &level in levels {
                let iv = match (&boot, method) {
                    (Err(_), IntervalMethod::Percentile) => None,
                    (Ok(b), _) => builder.build(method, level, &sample, &fit, b),
                    (Err(_), _) => {
                        let empty = BootstrapRun { original: fit, estimates: vec![], failed: 0, requested: 0 };
                        builder.build(method, level, &sample, &fit, &empty)
                    }
                };
                out.intervals.push(iv);
            }
        }
    }
    Ok(out)
}

fn point_rows(scenario: &McScenario, outcomes: &[Outcome]) -> Vec<PointRow> {
    let mut rows = Vec::with_capacity(4);
    for estimator in [Estimator::Mle, Estimator::MleBiasCorrected] {
        let estimates: Vec<(f64, f64)> = outcomes
            .iter()
            .filter_map(|o| if estimator == Estimator::Mle { o.mle } else { o.bc })
            .collect();
        let failures = outcomes.len() - estimates.len();
        for parameter in PARAMETERS {
            let (truth, values): (f64, Vec<f64>) = match parameter {
                Parameter::Theta => (scenario.theta_true, estimates.iter().map(|e| e.0).collect()),
                Parameter::Pi => (scenario.pi_true, estimates.iter().map(|e| e.1).collect()),
            };
            let m = values.len() as f64;
            let mean = values.iter().sum::<f64>() / m;
            let variance = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
            let bias = mean - truth;
            let mse = variance + bias * bias;
            let sq_err: Vec<f64> = values.iter().map(|x| (x - truth).powi(2)).collect();
            let sq_mean = sq_err.iter().sum::<f64>() / m;
            let sq_var = sq_err.iter().map(|s| (s - sq_mean).powi(2)).sum::<f64>() / m;
            rows.push(PointRow {
                scenario_id: scenario.id(),
                n: scenario.n,
                theta_true: scenario.theta_true,
                pi_true: scenario.pi_true,
                estimator,
                parameter,
                mean,
                bias,
                variance,
                mse,
                mc_se: (sq_var / m).sqrt(),
                failures,
            });
        }
    }
    rows
}

fn coverage_rows(scenario: &McScenario, levels: &[f64], outcomes: &[Outcome]) -> (Vec<CoverageRow>, Vec<usize>) {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (mi, method) in METHODS.iter().enumerate() {
        for (li, &level) in levels.iter().enumerate() {
            let slot = mi * levels.len() + li;
            let built: Vec<&(IntervalEstimate, IntervalEstimate)> =
                outcomes.iter().filter_map(|o| o.intervals[slot].as_ref()).collect();
            failures.push(outcomes.len() - built.len());
            let m = built.len() as f64;
            for parameter in PARAMETERS {
                let (truth, pick): (f64, fn(&(IntervalEstimate, IntervalEstimate)) -> &IntervalEstimate) =
                    match parameter {
                        Parameter::Theta => (scenario.theta_true, |p| &p.0),
                        Parameter::Pi => (scenario.pi_true, |p| &p.1),
                    };
                let (mut inside, mut left, mut right) = (0usize, 0usize, 0usize);
                for pair in &built {
                    let iv = pick(pair);
                    if truth < iv.lower {
                        left += 1;
                    } else if truth > iv.upper {
                        right += 1;
                    } else {
                        inside += 1;
                    }
                }
                let coverage = inside as f64 / m;
                rows.push(CoverageRow {
                    scenario_id: scenario.id(),
                    n: scenario.n,
                    theta_true: scenario.theta_true,
                    pi_true: scenario.pi_true,
                    method: *method,
                    parameter,
                    level,
                    coverage,
                    left_tail: left as f64 / m,
                    right_tail: right as f64 / m,
                    mc_se: ((coverage * (1.0 - coverage)).max(1.0 / m) / m).sqrt(),
                });
            }
        }
    }
    (rows, failures)
}

fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() || levels.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
        return Err(Error::InvalidParameter(format!("levels must lie in (0, 1), got {levels:?}")));
    }
    Ok(())
}

fn simulate(
    scenario: &McScenario,
    levels: &[f64],
    source: &dyn SampleSource,
    intervals: Option<&dyn IntervalBuilder>,
) -> Result<Vec<Outcome>> {
    scenario.validate()?;
    (0..scenario.mc_reps)
        .into_par_iter()
        .map(|r| replicate(scenario, levels, source, intervals, r))
        .collect()
}

/// Point study with an injected sample source.
pub fn run_point_study_with(scenario: &McScenario, source: &dyn SampleSource) -> Result<McPointReport> {
    let outcomes = simulate(scenario, &[], source, None)?;
    Ok(McPointReport { scenario: *scenario, rows: point_rows(scenario, &outcomes) })
}

/// Bias and MSE of the MLE and of its bootstrap bias correction.
pub fn run_point_study(scenario: &McScenario) -> Result<McPointReport> {
    run_point_study_with(scenario, &ZmplSource::new(scenario)?)
}

/// Coverage study with injected sample source and interval builder.
pub fn run_coverage_study_with(
    scenario: &McScenario,
    levels: &[f64],
    source: &dyn SampleSource,
    intervals: &dyn IntervalBuilder,
) -> Result<McCoverageReport> {
    check_levels(levels)?;
    let outcomes = simulate(scenario, levels, source, Some(intervals))?;
    let (rows, failures) = coverage_rows(scenario, levels, &outcomes);
    Ok(McCoverageReport { scenario: *scenario, rows, failures })
}

/// Empirical coverage and tail miss rates of asymptotic and percentile
/// intervals at each level.
pub fn run_coverage_study(scenario: &McScenario, levels: &[f64]) -> Result<McCoverageReport> {
    run_coverage_study_with(scenario, levels, &ZmplSource::new(scenario)?, &StandardIntervals)
}

/// Both studies from a single pass over the replicates.
pub fn run_study(scenario: &McScenario, levels: &[f64]) -> Result<(McPointReport, McCoverageReport)> {
    check_levels(levels)?;
    let outcomes = simulate(scenario, levels, &ZmplSource::new(scenario)?, Some(&StandardIntervals))?;
    let (rows, failures) = coverage_rows(scenario, levels, &outcomes);
    Ok((
        McPointReport { scenario: *scenario, rows: point_rows(scenario, &outcomes) },
        McCoverageReport { scenario: *scenario, rows, failures },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;
    use crate::estimation::mle_fit;

    struct Fixed(CountSample);

    impl SampleSource for Fixed {
        fn draw(&self, _: &mut StreamRng) -> CountSample {
            self.0.clone()
        }
    }

    struct Everything;

    impl IntervalBuilder for Everything {
        fn build(
            &self,
            method: IntervalMethod,
            level: f64,
            _: &CountSample,
            fit: &FitResult,
            _: &BootstrapRun,
        ) -> Option<(IntervalEstimate, IntervalEstimate)> {
            let iv = |parameter, estimate| IntervalEstimate {
                parameter,
                estimate,
                lower: f64::NEG_INFINITY,
                upper: f64::INFINITY,
                level,
                method,
            };
            Some((iv(Parameter::Theta, fit.theta), iv(Parameter::Pi, fit.pi)))
        }
    }

    #[test]
    fn single_replicate_equals_single_fit() {
        let s = datasets::strikes();
        let scenario = McScenario::new(156, 1.5, 0.0, 1, 20, 3).unwrap();
        let report = run_point_study_with(&scenario, &Fixed(s.clone())).unwrap();
        let fit = mle_fit(&s).unwrap();
        let row = report.row(Estimator::Mle, Parameter::Theta).unwrap();
        assert_eq!(row.bias, fit.theta - 1.5);
        assert_eq!(row.variance, 0.0);
        assert_eq!(row.mse, row.bias * row.bias);
        let row = report.row(Estimator::Mle, Parameter::Pi).unwrap();
        assert_eq!(row.mean, fit.pi);
    }

    #[test]
    fn unbounded_intervals_always_cover() {
        let scenario = McScenario::new(40, 1.5, 0.1, 12, 10, 4).unwrap();
        let source = ZmplSource::new(&scenario).unwrap();
        let report = run_coverage_study_with(&scenario, &DEFAULT_LEVELS, &source, &Everything).unwrap();
        assert_eq!(report.rows.len(), 2 * 2 * 3);
        for row in &report.rows {
            assert_eq!((row.coverage, row.left_tail, row.right_tail), (1.0, 0.0, 0.0));
        }
    }

    #[test]
    fn redraw_cap_is_enforced() {
        let degenerate = CountSample::from_values(vec![0, 1, 0]).unwrap();
        let scenario = McScenario::new(3, 1.5, 0.0, 2, 5, 1).unwrap();
        assert!(matches!(
            run_point_study_with(&scenario, &Fixed(degenerate)),
            Err(Error::DegenerateSample(_))
        ));
    }

    #[test]
    fn identities_hold() {
        let scenario = McScenario::new(35, 2.0, 0.1, 30, 20, 9).unwrap();
        let (point, cov) = run_study(&scenario, &DEFAULT_LEVELS).unwrap();
        for row in &point.rows {
            assert!((row.mse - (row.variance + row.bias * row.bias)).abs() < 1e-10);
            assert!(row.mse >= 0.0);
        }
        for row in &cov.rows {
            assert!((row.coverage + row.left_tail + row.right_tail - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn identical_across_thread_counts() {
        let scenario = McScenario::new(35, 1.5, -0.1, 16, 15, 21).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_study(&scenario, &DEFAULT_LEVELS).unwrap())
        };
        let (p1, c1) = run(1);
        let (p4, c4) = run(4);
        assert_eq!(p1, p4);
        assert_eq!(c1, c4);
    }
}
