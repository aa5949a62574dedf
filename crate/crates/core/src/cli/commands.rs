use std::fmt::Write as _;

use serde::Serialize;

use super::{emit, parse_dataset, parse_models, CliError, FitArgs, Format, GofArgs, SdplotArgs, SimulateArgs, StudyArg};
use crate::distributions::CountSample;
use crate::estimation::{
    bootstrap_replicates, expected_fisher_info, fit_model, BootstrapConfig, Boundary, ModelFit, ModelKind,
    ParamEstimate,
};
use crate::inference::{
    asymptotic_ci, expected_frequencies, goodness_of_fit, gradient_test, percentile_ci_from_run,
    standardized_differences, wald_interval, CellLayout, DofConvention, GofReport, GradientTestResult,
    IntervalEstimate,
};
use crate::simulation::{
    expand_grid, render_coverage_csv, render_coverage_table, render_point_csv, render_point_table,
    run_coverage_study, run_point_study, run_study, McCoverageReport, McPointReport,
};

#[derive(Debug, Serialize)]
struct Interval {
    parameter: &'static str,
    method: &'static str,
    level: f64,
    lower: f64,
    upper: f64,
}

impl Interval {
    fn from_estimate(iv: &IntervalEstimate) -> Self {
        Self {
            parameter: iv.parameter.as_str(),
            method: iv.method.as_str(),
            level: iv.level,
            lower: iv.lower,
            upper: iv.upper,
        }
    }
}

#[derive(Debug, Serialize)]
struct BootstrapSummary {
    replicates: usize,
    failed: usize,
    theta_bias_corrected: f64,
    pi_bias_corrected: f64,
    projected: bool,
}

#[derive(Debug, Serialize)]
struct Diagnostics {
    converged: bool,
    iterations: usize,
    score_norm: f64,
    boundary: Option<Boundary>,
}

#[derive(Debug, Serialize)]
struct FitReport {
    dataset: String,
    n: u64,
    zeros: u64,
    model: ModelKind,
    estimates: Vec<ParamEstimate>,
    log_lik: f64,
    intervals: Vec<Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bootstrap: Option<BootstrapSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gradient_test: Option<GradientTestResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<Diagnostics>,
    gof: GofReport,
}

fn check_level(level: f64) -> Result<(), CliError> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!("--level must lie in (0, 1), got {level}")))
    }
}

fn fit_one(
    kind: ModelKind,
    sample: &CountSample,
    args: &FitArgs,
    layout: CellLayout,
) -> Result<FitReport, CliError> {
    let fit: ModelFit = fit_model(kind, sample)?;
    let mut intervals = Vec::new();
    let mut bootstrap = None;
    let mut gradient = None;
    let mut diagnostics = None;
    if let Some(z) = &fit.zmpl {
        diagnostics = Some(Diagnostics {
            converged: z.converged,
            iterations: z.iterations,
            score_norm: z.score_norm,
            boundary: z.boundary,
        });
        if z.boundary.is_none() {
            let info = expected_fisher_info(&z.params(), sample.n())?;
            let (t, p) = asymptotic_ci(z, &info, args.level)?;
            intervals.extend([Interval::from_estimate(&t), Interval::from_estimate(&p)]);
        }
        if args.boot > 0 {
            let config = BootstrapConfig {
                replicates: args.boot,
                seed: args.seed,
                scheme: args.scheme.into(),
                ..Default::default()
            };
            let run = bootstrap_replicates(sample, &config)?;
            let (t, p) = percentile_ci_from_run(&run, args.level)?;
            intervals.extend([Interval::from_estimate(&t), Interval::from_estimate(&p)]);
            let bc = run.bias_corrected(sample)?;
            bootstrap = Some(BootstrapSummary {
                replicates: run.requested,
                failed: run.failed,
                theta_bias_corrected: bc.theta,
                pi_bias_corrected: bc.pi,
                projected: bc.adjusted,
            });
        }
        gradient = Some(gradient_test(z, sample.n()));
    } else {
        for e in &fit.estimates {
            if let Some(se) = e.se {
                let (lower, upper) = wald_interval(e.value, se, args.level)?;
                intervals.push(Interval { parameter: e.name, method: "aci", level: args.level, lower, upper });
            }
        }
    }
    let gof = goodness_of_fit(&fit.model, sample, layout, args.dof_convention.into())?;
    Ok(FitReport {
        dataset: args.data.data.clone(),
        n: sample.n(),
        zeros: sample.n0(),
        model: kind,
        estimates: fit.estimates,
        log_lik: fit.log_lik,
        intervals,
        bootstrap,
        gradient_test: gradient,
        diagnostics,
        gof,
    })
}

fn gof_table(out: &mut String, gof: &GofReport) {
    let _ = writeln!(out, "  {:>6} {:>9} {:>11} {:>11}", "cell", "observed", "expected", "(O-E)^2/E");
    for c in &gof.cells {
        let _ = writeln!(out, "  {:>6} {:>9} {:>11.4} {:>11.4}", c.label, c.observed, c.expected, c.contribution);
    }
    let _ = writeln!(
        out,
        "  chi-square = {:.4}, dof = {}, p-value = {:.4}",
        gof.chi_square, gof.dof, gof.p_value
    );
}

fn fit_text(reports: &[FitReport]) -> String {
    let mut out = String::new();
    if let Some(r) = reports.first() {
        let _ = writeln!(out, "dataset: {} (n = {}, zeros = {})", r.dataset, r.n, r.zeros);
    }
    for r in reports {
        let _ = writeln!(out, "\nmodel: {}", r.model);
        for e in &r.estimates {
            match e.se {
                Some(se) => {
                    let _ = writeln!(out, "  {:<8} {:>10.4}  (se {:.4})", e.name, e.value, se);
                }
                None => {
                    let _ = writeln!(out, "  {:<8} {:>10.4}", e.name, e.value);
                }
            }
        }
        let _ = writeln!(out, "  log-likelihood = {:.4}", r.log_lik);
        if let Some(d) = &r.diagnostics {
            if let Some(b) = d.boundary {
                let _ = writeln!(out, "  warning: estimate on the boundary ({b:?})");
            }
            if !d.converged {
                let _ = writeln!(out, "  warning: optimizer did not converge");
            }
        }
        for iv in &r.intervals {
            let _ = writeln!(
                out,
                "  {}({}, {}) = ({:.4}; {:.4})",
                iv.method, iv.parameter, iv.level, iv.lower, iv.upper
            );
        }
        if let Some(b) = &r.bootstrap {
            let _ = writeln!(
                out,
                "  bias-corrected: theta = {:.4}, pi = {:.4}  ({} replicates, {} failed{})",
                b.theta_bias_corrected,
                b.pi_bias_corrected,
                b.replicates,
                b.failed,
                if b.projected { ", projected onto the parameter space" } else { "" }
            );
        }
        if let Some(g) = &r.gradient_test {
            let _ = writeln!(out, "  gradient test of pi = 0: S_g = {:.4}, p-value = {:.4}", g.statistic, g.p_value);
        }
        gof_table(&mut out, &r.gof);
    }
    out
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
}

fn fit_csv(reports: &[FitReport]) -> String {
    let mut rows = Vec::new();
    for r in reports {
        let m = r.model.to_string();
        let mut push = |key: String, value: String| rows.push(vec![m.clone(), key, value]);
        push("n".into(), r.n.to_string());
        for e in &r.estimates {
            push(e.name.into(), e.value.to_string());
            if let Some(se) = e.se {
                push(format!("se_{}", e.name), se.to_string());
            }
        }
        push("log_lik".into(), r.log_lik.to_string());
        for iv in &r.intervals {
            push(format!("{}_{}_lower", iv.method, iv.parameter), iv.lower.to_string());
            push(format!("{}_{}_upper", iv.method, iv.parameter), iv.upper.to_string());
        }
        if let Some(b) = &r.bootstrap {
            push("theta_bias_corrected".into(), b.theta_bias_corrected.to_string());
            push("pi_bias_corrected".into(), b.pi_bias_corrected.to_string());
            push("bootstrap_failed".into(), b.failed.to_string());
        }
        if let Some(g) = &r.gradient_test {
            push("gradient_statistic".into(), g.statistic.to_string());
            push("gradient_p_value".into(), g.p_value.to_string());
        }
        push("chi_square".into(), r.gof.chi_square.to_string());
        push("dof".into(), r.gof.dof.to_string());
        push("p_value".into(), r.gof.p_value.to_string());
    }
    csv_text(&["model", "key", "value"], rows)
}

fn json_lines<T: Serialize>(items: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut out = String::new();
    for item in items {
        let line = serde_json::to_string(&item).map_err(|e| CliError::data(e.to_string()))?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

pub(super) fn fit(args: &FitArgs) -> Result<(), CliError> {
    check_level(args.level)?;
    if args.boot == 1 {
        return Err(CliError::usage("--boot must be 0 or at least 2"));
    }
    let models = parse_models(&args.model)?;
    let sample = parse_dataset(&args.data.data)?;
    let layout = args.data.layout();
    let reports = models
        .into_iter()
        .map(|k| fit_one(k, &sample, args, layout))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match args.output.format {
        Format::Text => fit_text(&reports),
        Format::Csv => fit_csv(&reports),
        Format::JsonLines => json_lines(&reports)?,
    };
    emit(&args.output.out, &text)
}

#[derive(Serialize)]
struct GofEntry {
    model: ModelKind,
    #[serde(flatten)]
    report: GofReport,
}

pub(super) fn gof(args: &GofArgs) -> Result<(), CliError> {
    let models = parse_models(&args.model)?;
    let sample = parse_dataset(&args.data.data)?;
    let layout = args.data.layout();
    let convention: DofConvention = args.dof_convention.into();
    let entries = models
        .into_iter()
        .map(|kind| {
            let fit = fit_model(kind, &sample)?;
            Ok(GofEntry { model: kind, report: goodness_of_fit(&fit.model, &sample, layout, convention)? })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let text = match args.output.format {
        Format::Text => {
            let mut out = String::new();
            for e in &entries {
                let _ = writeln!(out, "model: {}", e.model);
                gof_table(&mut out, &e.report);
            }
            out
        }
        Format::Csv => {
            let rows = entries
                .iter()
                .flat_map(|e| {
                    e.report.cells.iter().map(move |c| {
                        vec![
                            e.model.to_string(),
                            c.label.clone(),
                            c.observed.to_string(),
                            c.expected.to_string(),
                            c.contribution.to_string(),
                            e.report.chi_square.to_string(),
                            e.report.dof.to_string(),
                            e.report.p_value.to_string(),
                        ]
                    })
                })
                .collect();
            csv_text(
                &["model", "cell", "observed", "expected", "contribution", "chi_square", "dof", "p_value"],
                rows,
            )
        }
        Format::JsonLines => json_lines(&entries)?,
    };
    emit(&args.output.out, &text)
}

pub(super) fn sdplot(args: &SdplotArgs) -> Result<(), CliError> {
    let models = parse_models(&args.model)?;
    let sample = parse_dataset(&args.data.data)?;
    let layout = args.data.layout();
    let max_k = sample.max();
    let expected = models
        .iter()
        .map(|&kind| {
            let fit = fit_model(kind, &sample)?;
            Ok((kind.to_string(), expected_frequencies(&fit.model, sample.n(), max_k, layout)))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let data = standardized_differences(&sample.cell_counts(max_k, true), &expected, args.sd_norm.into())?;
    let text = match args.format {
        Format::Csv => data.to_csv()?,
        Format::JsonLines => json_lines(&data.points)?,
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:>7} {:<8} {:>9} {:>11} {:>11} {:>9}",
                "support", "model", "observed", "expected", "delta", "delta_std"
            );
            for p in &data.points {
                let _ = writeln!(
                    out,
                    "{:>7} {:<8} {:>9} {:>11.4} {:>11.4} {:>9.4}",
                    p.support, p.model, p.observed, p.expected, p.delta, p.delta_std
                );
            }
            out
        }
    };
    emit(&args.out, &text)
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    study: &'static str,
    #[serde(flatten)]
    row: &'a T,
}

fn run_simulation(args: &SimulateArgs) -> Result<(Vec<McPointReport>, Vec<McCoverageReport>), CliError> {
    let scenarios = expand_grid(&args.sizes, &args.theta, &args.pi, args.reps, args.boot, args.seed)?;
    if scenarios.is_empty() {
        return Err(CliError::usage("the simulation grid is empty"));
    }
    let mut points = Vec::new();
    let mut coverage = Vec::new();
    for s in &scenarios {
        match args.study {
            StudyArg::Both => {
                let (p, c) = run_study(s, &args.levels)?;
                points.push(p);
                coverage.push(c);
            }
            StudyArg::Point => points.push(run_point_study(s)?),
            StudyArg::Coverage => coverage.push(run_coverage_study(s, &args.levels)?),
        }
    }
    Ok((points, coverage))
}

pub(super) fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    if let Some(&l) = args.levels.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
        return Err(CliError::usage(format!("--levels must lie in (0, 1), got {l}")));
    }
    if args.reps == 0 {
        return Err(CliError::usage("--reps must be at least 1"));
    }
    let (points, coverage) = match args.threads {
        Some(0) => return Err(CliError::usage("--threads must be at least 1")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::usage(e.to_string()))?
            .install(|| run_simulation(args))?,
        None => run_simulation(args)?,
    };
    let with_point = args.study != StudyArg::Coverage;
    let with_coverage = args.study != StudyArg::Point;

    if args.format == Format::Csv {
        if let Some(dir) = &args.out {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::data(format!("cannot create {}: {e}", dir.display())))?;
            if with_point {
                emit(&Some(dir.join("point.csv")), &render_point_csv(&points))?;
            }
            if with_coverage {
                emit(&Some(dir.join("coverage.csv")), &render_coverage_csv(&coverage))?;
            }
            return Ok(());
        }
        let mut parts = Vec::new();
        if with_point {
            parts.push(render_point_csv(&points));
        }
        if with_coverage {
            parts.push(render_coverage_csv(&coverage));
        }
        return emit(&None, &parts.join("\n"));
    }

    let (text, file) = if args.format == Format::Text {
        let mut out = String::new();
        if with_point {
            let _ = writeln!(out, "Bias and MSE (mc_se is the Monte Carlo standard error of the MSE)");
            out.push_str(&render_point_table(&points));
        }
        if with_coverage {
            if with_point {
                out.push('\n');
            }
            let _ = writeln!(out, "Empirical coverage");
            out.push_str(&render_coverage_table(&coverage));
        }
        (out, "simulation.txt")
    } else {
        let mut out = json_lines(
            points.iter().flat_map(|r| r.rows.iter()).map(|row| Tagged { study: "point", row }),
        )?;
        out.push_str(&json_lines(
            coverage.iter().flat_map(|r| r.rows.iter()).map(|row| Tagged { study: "coverage", row }),
        )?);
        (out, "simulation.jsonl")
    };
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::data(format!("cannot create {}: {e}", dir.display())))?;
            emit(&Some(dir.join(file)), &text)
        }
        None => emit(&None, &text),
    }
}
