//! Command-line front end: `fit`, `gof`, `sdplot` and `simulate`.

mod commands;
mod data;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use data::{is_builtin, parse_dataset, parse_dataset_str, BUILTIN_PREFIX};

use crate::estimation::{BootstrapScheme, ModelKind};
use crate::inference::{CellLayout, DofConvention, SdNorm};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "zmpl", version, about = "Zero-modified Poisson-Lindley models for count data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit models, with intervals, gradient test and goodness of fit.
    Fit(FitArgs),
    /// Chi-square goodness of fit of fitted models.
    Gof(GofArgs),
    /// Standardized differences between observed and fitted frequencies.
    Sdplot(SdplotArgs),
    /// Monte Carlo study of bias, MSE and interval coverage.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CellsArg {
    /// Open cells for builtin datasets, closed otherwise.
    Auto,
    Closed,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DofArg {
    CellsMinusOne,
    CellsMinusOneMinusParams,
}

impl From<DofArg> for DofConvention {
    fn from(d: DofArg) -> Self {
        match d {
            DofArg::CellsMinusOne => DofConvention::CellsMinusOne,
            DofArg::CellsMinusOneMinusParams => DofConvention::CellsMinusOneMinusParams,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SdNormArg {
    PerSupportPoint,
    PerModel,
    Global,
}

impl From<SdNormArg> for SdNorm {
    fn from(s: SdNormArg) -> Self {
        match s {
            SdNormArg::PerSupportPoint => SdNorm::PerSupportPoint,
            SdNormArg::PerModel => SdNorm::PerModel,
            SdNormArg::Global => SdNorm::Global,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Parametric,
    Nonparametric,
}

impl From<SchemeArg> for BootstrapScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Parametric => BootstrapScheme::Parametric,
            SchemeArg::Nonparametric => BootstrapScheme::Nonparametric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StudyArg {
    Point,
    Coverage,
    Both,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Dataset file, or builtin:cytogenetic / builtin:strikes.
    #[arg(long)]
    pub data: String,
    /// Goodness-of-fit cell layout for the last cell.
    #[arg(long, value_enum, default_value_t = CellsArg::Auto)]
    pub cells: CellsArg,
}

impl DataArgs {
    pub fn layout(&self) -> CellLayout {
        match self.cells {
            CellsArg::Closed => CellLayout::Closed,
            CellsArg::Open => CellLayout::Open,
            CellsArg::Auto if is_builtin(&self.data) => CellLayout::Open,
            CellsArg::Auto => CellLayout::Closed,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this path instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma-separated models: poisson, zmp, pl, zmpl, or all.
    #[arg(long, default_value = "zmpl")]
    pub model: String,
    /// Nominal confidence level.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Bootstrap replicates for percentile intervals and bias correction (0 disables).
    #[arg(long, default_value_t = 1000)]
    pub boot: usize,
    #[arg(long, value_enum, default_value_t = SchemeArg::Parametric)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = DofArg::CellsMinusOne)]
    pub dof_convention: DofArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GofArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma-separated models: poisson, zmp, pl, zmpl, or all.
    #[arg(long, default_value = "all")]
    pub model: String,
    #[arg(long, value_enum, default_value_t = DofArg::CellsMinusOne)]
    pub dof_convention: DofArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SdplotArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma-separated models: poisson, zmp, pl, zmpl, or all.
    #[arg(long, default_value = "all")]
    pub model: String,
    #[arg(long, value_enum, default_value_t = SdNormArg::PerSupportPoint)]
    pub sd_norm: SdNormArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Sample sizes.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [35, 60, 90, 120])]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [1.5, 2.0])]
    pub theta: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [-0.1, 0.0, 0.1])]
    pub pi: Vec<f64>,
    /// Monte Carlo replicates per scenario.
    #[arg(long, default_value_t = 2000)]
    pub reps: usize,
    /// Bootstrap replicates within each Monte Carlo replicate.
    #[arg(long, default_value_t = 250)]
    pub boot: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Nominal levels of the coverage study.
    #[arg(long, value_delimiter = ',', default_values_t = [0.90, 0.95, 0.99])]
    pub levels: Vec<f64>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = StudyArg::Both)]
    pub study: StudyArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Output directory; receives point.csv and coverage.csv for CSV output,
    /// simulation.txt or simulation.jsonl otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) => EXIT_USAGE,
            Error::Data(_) | Error::DegenerateSample(_) => EXIT_DATA,
            Error::Boundary(_)
            | Error::SingularInformation
            | Error::Numerical(_)
            | Error::BootstrapFailures { .. } => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

pub(crate) fn parse_models(list: &str) -> Result<Vec<ModelKind>, CliError> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(ModelKind::ALL.to_vec());
    }
    let mut models = Vec::new();
    for name in list.split(',').filter(|s| !s.trim().is_empty()) {
        let kind: ModelKind = name.parse().map_err(|e: Error| CliError::usage(e.to_string()))?;
        if !models.contains(&kind) {
            models.push(kind);
        }
    }
    if models.is_empty() {
        return Err(CliError::usage("at least one model is required"));
    }
    Ok(models)
}

pub(crate) fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::data(format!("cannot write output: {e}")))
        }
    }
}

/// Runs a parsed command.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fit(a) => commands::fit(&a),
        Command::Gof(a) => commands::gof(&a),
        Command::Sdplot(a) => commands::sdplot(&a),
        Command::Simulate(a) => commands::simulate(&a),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_lists() {
        assert_eq!(parse_models("zmpl").unwrap(), vec![ModelKind::Zmpl]);
        assert_eq!(parse_models("pl, zmpl,pl").unwrap(), vec![ModelKind::Pl, ModelKind::Zmpl]);
        assert_eq!(parse_models("all").unwrap().len(), 4);
        assert_eq!(parse_models("nb").unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::Data("x".into())).code, EXIT_DATA);
        assert_eq!(CliError::from(Error::SingularInformation).code, EXIT_NUMERICAL);
        assert_eq!(CliError::from(Error::InvalidParameter("x".into())).code, EXIT_USAGE);
    }

    #[test]
    fn help_and_bad_flags() {
        assert_eq!(main_with_args(["zmpl", "--help"]), EXIT_OK);
        assert_eq!(main_with_args(["zmpl", "fit", "--bogus"]), EXIT_USAGE);
        assert_eq!(main_with_args(["zmpl", "fit"]), EXIT_USAGE);
    }

    #[test]
    fn simulate_defaults_cover_the_design() {
        let cli = Cli::try_parse_from(["zmpl", "simulate"]).unwrap();
        let Command::Simulate(a) = cli.command else { panic!() };
        assert_eq!(a.sizes.len() * a.theta.len() * a.pi.len(), 24);
        assert_eq!((a.reps, a.boot), (2000, 250));
    }

    #[test]
    fn auto_cells() {
        let d = DataArgs { data: "builtin:strikes".into(), cells: CellsArg::Auto };
        assert_eq!(d.layout(), CellLayout::Open);
        let d = DataArgs { data: "counts.txt".into(), cells: CellsArg::Auto };
        assert_eq!(d.layout(), CellLayout::Closed);
    }
}
