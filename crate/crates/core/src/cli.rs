//! Batch experiment runner behind the `prophetlab` binary.
//!
//! ```text
//! prophetlab <experiment> --dist <spec> --objective <max|min> --n <n1,n2,...>
//!            [--k <count>] [--trials <t>] [--seed <s>] [--workers <w>]
//!            [--c <spacing>] --out <path> [--format csv|json] [--config <file.json>]
//! ```
//!
//! A JSON config file may carry the same settings under the field names of
//! [`ExperimentConfig`]; command-line flags override it.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric precondition,
//! 4 I/O error.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::benchmark::prophet_value;
use crate::distributions::{Catalog, ContinuousDistribution};
use crate::error::Error;
use crate::evt::{
    asymptotic_ratio, estimate_evt_index_max, estimate_evt_index_min, lambda_acr,
    DEFAULT_ESTIMATOR_SPACING,
};
use crate::policies::{
    evt_single_threshold_min, minimum_quota, multi_unit_threshold, optimal_values,
    single_threshold_expected_value, ThresholdPolicy,
};
use crate::simulate::{estimate_ratio_with, SimulationOptions, MIN_TRIALS};
use crate::Objective;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Optimal DP value over the prophet value against the limit ratio.
    AcrConvergence,
    /// EVT single threshold for minima: exact and simulated ratios.
    SingleThreshold,
    /// Multi-unit threshold for minima, simulated.
    MultiUnit,
    /// Quantile-based extreme value index estimates.
    EstimateGamma,
    /// `Λ(γ)` on the grid γ = -3.0, -2.9, ..., 0.9.
    LambdaCurve,
}

impl Experiment {
    fn needs_distribution(self) -> bool {
        self != Experiment::LambdaCurve
    }

    fn uses_monte_carlo(self) -> bool {
        matches!(self, Experiment::SingleThreshold | Experiment::MultiUnit)
    }

    fn as_str(self) -> &'static str {
        match self {
            Experiment::AcrConvergence => "acr-convergence",
            Experiment::SingleThreshold => "single-threshold",
            Experiment::MultiUnit => "multi-unit",
            Experiment::EstimateGamma => "estimate-gamma",
            Experiment::LambdaCurve => "lambda-curve",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub const DEFAULT_TRIALS: usize = 10_000;

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, alias = "dist")]
    pub dist_spec: Option<String>,
    #[serde(default = "default_objective")]
    pub objective: Objective,
    #[serde(default, alias = "n")]
    pub n_grid: Vec<usize>,
    /// Fixed quota for `multi-unit`; `⌈log n⌉` per row when absent.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads for Monte Carlo; `0` uses all cores.
    #[serde(default)]
    pub workers: usize,
    /// Quantile spacing for `estimate-gamma`.
    #[serde(default = "default_spacing")]
    pub c: f64,
    #[serde(alias = "out")]
    pub out_path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

fn default_objective() -> Objective {
    Objective::Min
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

fn default_spacing() -> f64 {
    DEFAULT_ESTIMATOR_SPACING
}

#[derive(Debug, Parser)]
#[command(name = "prophetlab", version, about = "Prophet inequality experiments")]
pub struct Args {
    /// Experiment to run; may instead come from --config.
    #[arg(value_enum)]
    pub experiment: Option<Experiment>,
    /// JSON file with ExperimentConfig fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Distribution spec, e.g. `uniform`, `exponential:rate=1`, `pareto:alpha=2`,
    /// `rw_witness:gamma=-2`.
    #[arg(long)]
    pub dist: Option<String>,
    #[arg(long)]
    pub objective: Option<Objective>,
    /// Comma-separated horizons.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Failure of a CLI run, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => CliError::Config(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialConfig {
    experiment: Option<Experiment>,
    #[serde(alias = "dist")]
    dist_spec: Option<String>,
    objective: Option<Objective>,
    #[serde(alias = "n")]
    n_grid: Option<Vec<usize>>,
    k: Option<usize>,
    trials: Option<usize>,
    seed: Option<u64>,
    workers: Option<usize>,
    c: Option<f64>,
    #[serde(alias = "out")]
    out_path: Option<PathBuf>,
    format: Option<Format>,
}

/// Merges the config file (if any) with flags, flags taking precedence.
pub fn resolve_config(args: &Args) -> Result<ExperimentConfig, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<PartialConfig>(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => PartialConfig::default(),
    };
    let experiment = args
        .experiment
        .or(file.experiment)
        .ok_or_else(|| CliError::Config("no experiment given".into()))?;
    let out_path = args
        .out
        .clone()
        .or(file.out_path)
        .ok_or_else(|| CliError::Config("--out is required".into()))?;
    let config = ExperimentConfig {
        experiment,
        dist_spec: args.dist.clone().or(file.dist_spec),
        objective: args
            .objective
            .or(file.objective)
            .unwrap_or_else(default_objective),
        n_grid: args.n.clone().or(file.n_grid).unwrap_or_default(),
        k: args.k.or(file.k),
        trials: args.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
        seed: args.seed.or(file.seed).unwrap_or(0),
        workers: args.workers.or(file.workers).unwrap_or(0),
        c: args.c.or(file.c).unwrap_or(DEFAULT_ESTIMATOR_SPACING),
        out_path,
        format: args.format.or(file.format).unwrap_or_default(),
    };
    validate(&config)?;
    Ok(config)
}

fn validate(config: &ExperimentConfig) -> Result<(), CliError> {
    let e = config.experiment;
    if e.needs_distribution() {
        if config.dist_spec.is_none() {
            return Err(CliError::Config(format!("{} needs --dist", e.as_str())));
        }
        if config.n_grid.is_empty() {
            return Err(CliError::Config(format!("{} needs --n", e.as_str())));
        }
    }
    if config.n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(
            "the n grid must be strictly increasing".into(),
        ));
    }
    if config.n_grid.first() == Some(&0) {
        return Err(CliError::Config("horizons must be positive".into()));
    }
    if e.uses_monte_carlo() && config.trials < MIN_TRIALS {
        return Err(CliError::Config(format!(
            "need at least {MIN_TRIALS} trials, got {}",
            config.trials
        )));
    }
    if matches!(e, Experiment::SingleThreshold | Experiment::MultiUnit)
        && config.objective != Objective::Min
    {
        return Err(CliError::Config(format!(
            "{} supports --objective min only",
            e.as_str()
        )));
    }
    Ok(())
}

/// One table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Real(v) if v.is_nan() => f.write_str("nan"),
            Cell::Real(v) if v.is_infinite() => f.write_str(if v > 0.0 { "inf" } else { "-inf" }),
            Cell::Real(v) => write!(f, "{v:.16e}"),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Cell::Int(v) => s.serialize_u64(v),
            Cell::Real(v) if v.is_finite() => s.serialize_f64(v),
            Cell::Real(_) => s.serialize_none(),
        }
    }
}

/// A result table.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    fn new(columns: &[&'static str]) -> Self {
        Report {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// An array of objects keyed by column name.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| {
                        (
                            c.to_string(),
                            serde_json::to_value(v).expect("cells serialize"),
                        )
                    })
                    .collect()
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub const ACR_COLUMNS: &[&str] = &["n", "G", "prophet", "ratio", "lambda_gamma", "abs_err"];
pub const SINGLE_THRESHOLD_COLUMNS: &[&str] = &[
    "n",
    "gamma",
    "threshold",
    "alg_exact",
    "prophet",
    "ratio",
    "mc_ratio",
    "mc_stderr",
];
pub const MULTI_UNIT_COLUMNS: &[&str] = &[
    "n",
    "k",
    "threshold",
    "prophet",
    "mean_alg",
    "ratio",
    "stderr",
    "ci95_lo",
    "ci95_hi",
];
pub const ESTIMATE_GAMMA_COLUMNS: &[&str] = &["n", "c", "gamma_hat", "gamma_known"];
pub const LAMBDA_CURVE_COLUMNS: &[&str] = &["gamma", "lambda"];

fn known_index(dist: &Catalog, objective: Objective) -> Option<f64> {
    match objective {
        Objective::Max => dist.gamma_max(),
        Objective::Min => dist.gamma_min(),
    }
}

fn parse_dist(config: &ExperimentConfig) -> Result<Catalog, CliError> {
    let spec = config.dist_spec.as_deref().unwrap_or_default();
    Ok(spec.parse::<Catalog>()?)
}

/// Runs the experiment and returns its table without writing anything.
pub fn build_report(config: &ExperimentConfig) -> Result<Report, CliError> {
    match config.experiment {
        Experiment::LambdaCurve => {
            let mut r = Report::new(LAMBDA_CURVE_COLUMNS);
            for i in 0..40 {
                let g = (i as f64 - 30.0) / 10.0;
                r.push(vec![Cell::Real(g), Cell::Real(lambda_acr(g)?)]);
            }
            Ok(r)
        }
        Experiment::AcrConvergence => {
            let dist = parse_dist(config)?;
            let obj = config.objective;
            let n_max = *config.n_grid.last().expect("validated");
            let table = optimal_values(&dist, n_max, obj)?;
            let limit = match known_index(&dist, obj) {
                Some(g) => asymptotic_ratio(g, obj)?,
                None => f64::NAN,
            };
            let mut r = Report::new(ACR_COLUMNS);
            for &n in &config.n_grid {
                let g = table.value(n).expect("n <= n_max");
                let prophet = prophet_value(&dist, n, obj)?;
                let ratio = g / prophet;
                r.push(vec![
                    Cell::Int(n as u64),
                    Cell::Real(g),
                    Cell::Real(prophet),
                    Cell::Real(ratio),
                    Cell::Real(limit),
                    Cell::Real((ratio - limit).abs()),
                ]);
            }
            Ok(r)
        }
        Experiment::SingleThreshold => {
            let dist = parse_dist(config)?;
            let gamma = dist.gamma_min().ok_or_else(|| {
                CliError::Numeric(Error::Domain(format!(
                    "{dist} has no extreme value index for minima"
                )))
            })?;
            let mut r = Report::new(SINGLE_THRESHOLD_COLUMNS);
            for &n in &config.n_grid {
                let t = evt_single_threshold_min(&dist, gamma, n)?;
                let alg = single_threshold_expected_value(&dist, n, t)?;
                let prophet = prophet_value(&dist, n, Objective::Min)?;
                let policy = ThresholdPolicy::single(t, n)?;
                let est = estimate_ratio_with(&dist, &policy, Objective::Min, sim_options(config))?;
                r.push(vec![
                    Cell::Int(n as u64),
                    Cell::Real(gamma),
                    Cell::Real(t),
                    Cell::Real(alg),
                    Cell::Real(prophet),
                    Cell::Real(alg / prophet),
                    Cell::Real(est.ratio),
                    Cell::Real(est.ratio_stderr()),
                ]);
            }
            Ok(r)
        }
        Experiment::MultiUnit => {
            let dist = parse_dist(config)?;
            let gamma = dist.gamma_min().ok_or_else(|| {
                CliError::Numeric(Error::Domain(format!(
                    "{dist} has no extreme value index for minima"
                )))
            })?;
            let mut r = Report::new(MULTI_UNIT_COLUMNS);
            for &n in &config.n_grid {
                let k = config.k.unwrap_or_else(|| minimum_quota(n));
                let t = multi_unit_threshold(&dist, gamma, n, k)?;
                let policy = ThresholdPolicy::multi_unit(t, n, k)?;
                let est = estimate_ratio_with(&dist, &policy, Objective::Min, sim_options(config))?;
                r.push(vec![
                    Cell::Int(n as u64),
                    Cell::Int(k as u64),
                    Cell::Real(t),
                    Cell::Real(est.benchmark),
                    Cell::Real(est.mean_alg),
                    Cell::Real(est.ratio),
                    Cell::Real(est.stderr),
                    Cell::Real(est.ci95_lo),
                    Cell::Real(est.ci95_hi),
                ]);
            }
            Ok(r)
        }
        Experiment::EstimateGamma => {
            let dist = parse_dist(config)?;
            let obj = config.objective;
            let known = known_index(&dist, obj).unwrap_or(f64::NAN);
            let mut r = Report::new(ESTIMATE_GAMMA_COLUMNS);
            for &n in &config.n_grid {
                let g = match obj {
                    Objective::Max => estimate_evt_index_max(&dist, n, config.c)?,
                    Objective::Min => estimate_evt_index_min(&dist, n, config.c)?,
                };
                r.push(vec![
                    Cell::Int(n as u64),
                    Cell::Real(config.c),
                    Cell::Real(g),
                    Cell::Real(known),
                ]);
            }
            Ok(r)
        }
    }
}

fn sim_options(config: &ExperimentConfig) -> SimulationOptions {
    SimulationOptions::new(config.trials, config.seed).workers(config.workers)
}

fn write_report(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)?;
    f.flush().map_err(io)
}

/// Runs an experiment and writes its report to `config.out_path`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report, CliError> {
    let report = build_report(config)?;
    write_report(&config.out_path, &report.render(config.format))?;
    Ok(report)
}

/// Entry point shared by the binary and tests; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match resolve_config(&args).and_then(|c| run_experiment(&c)) {
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("prophetlab: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(experiment: Experiment, dist: &str, n: &[usize]) -> ExperimentConfig {
        ExperimentConfig {
            experiment,
            dist_spec: Some(dist.into()),
            objective: Objective::Min,
            n_grid: n.to_vec(),
            k: None,
            trials: 1000,
            seed: 1,
            workers: 1,
            c: DEFAULT_ESTIMATOR_SPACING,
            out_path: PathBuf::from("unused"),
            format: Format::Csv,
        }
    }

    #[test]
    fn cells_format_with_seventeen_digits() {
        assert_eq!(Cell::Real(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(Cell::Real(2.0).to_string(), "2.0000000000000000e0");
        assert_eq!(Cell::Int(1000).to_string(), "1000");
        assert_eq!(Cell::Real(f64::NAN).to_string(), "nan");
    }

    #[test]
    fn lambda_curve_has_one_at_zero() {
        let mut c = config(Experiment::LambdaCurve, "", &[]);
        c.dist_spec = None;
        let r = build_report(&c).unwrap();
        assert_eq!(r.rows.len(), 40);
        assert_eq!(r.rows[0][0], Cell::Real(-3.0));
        assert_eq!(r.rows[30], vec![Cell::Real(0.0), Cell::Real(1.0)]);
        assert_eq!(r.rows[20][1], Cell::Real(2.0));
    }

    #[test]
    fn acr_convergence_uniform_min() {
        let r = build_report(&config(
            Experiment::AcrConvergence,
            "uniform",
            &[10, 100, 1000],
        ))
        .unwrap();
        let Cell::Real(ratio) = r.rows[2][3] else {
            panic!()
        };
        assert!((ratio - 2.0).abs() < 0.2);
        assert_eq!(
            r.to_csv().lines().next().unwrap(),
            "n,G,prophet,ratio,lambda_gamma,abs_err"
        );
    }

    #[test]
    fn estimate_gamma_exponential_min() {
        let r = build_report(&config(
            Experiment::EstimateGamma,
            "exponential:rate=1",
            &[1_000_000],
        ))
        .unwrap();
        let Cell::Real(g) = r.rows[0][2] else {
            panic!()
        };
        assert!((g + 1.0).abs() < 0.05);
    }

    #[test]
    fn validation_errors_are_config_errors() {
        let mut c = config(Experiment::AcrConvergence, "uniform", &[100, 10]);
        assert_eq!(validate(&c).unwrap_err().exit_code(), EXIT_CONFIG);
        c.n_grid = vec![10];
        c.experiment = Experiment::MultiUnit;
        c.trials = 10;
        assert_eq!(validate(&c).unwrap_err().exit_code(), EXIT_CONFIG);
        c.trials = 1000;
        c.objective = Objective::Max;
        assert_eq!(validate(&c).unwrap_err().exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn bad_spec_is_config_error_and_infinite_mean_is_numeric() {
        let c = config(Experiment::AcrConvergence, "normal", &[10]);
        assert_eq!(build_report(&c).unwrap_err().exit_code(), EXIT_CONFIG);
        let mut c = config(Experiment::AcrConvergence, "pareto:alpha=0.5", &[10]);
        c.objective = Objective::Max;
        assert_eq!(build_report(&c).unwrap_err().exit_code(), EXIT_NUMERIC);
    }

    #[test]
    fn json_rows_are_keyed_by_column() {
        let mut c = config(Experiment::LambdaCurve, "", &[]);
        c.dist_spec = None;
        let json = build_report(&c).unwrap().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v[30]["gamma"], serde_json::json!(0.0));
        assert_eq!(v[30]["lambda"], serde_json::json!(1.0));
    }
}
