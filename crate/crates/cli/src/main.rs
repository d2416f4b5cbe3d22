#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

//! `halfgilbert`: moments, MGF curves, simulation and validation from the
//! command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 argument error,
//! 3 numerical-domain error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use halfgilbert::analytic::{closed_moments, mgf_moments, mgf_scaled};
use halfgilbert::montecarlo::{
    run_monte_carlo_with_samples, simulate_plane_with_samples, MonteCarloError, PlaneConfig,
    SimConfig, SimStats,
};
use halfgilbert::validation::{validate, ValidationConfig, ValidationError, ValidationReport, Verdict};
use halfgilbert::{
    AnalyticError, Method, MgfPoint, ModelParams, MomentEntry, MomentReport, ToleranceConfig,
};

#[derive(Parser)]
#[command(name = "halfgilbert", version, about = "Terminal ray lengths in the half-Gilbert tessellation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moments of the terminal length of an east ray.
    Moments(MomentsArgs),
    /// Tabulate the moment generating function M_t(y) over a grid of t.
    Mgf(MgfArgs),
    /// Monte Carlo simulation of terminal lengths (JSON on stdout).
    Simulate(SimulateArgs),
    /// Compare closed-form, MGF-derivative and Monte Carlo moments.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Probability that a seed grows east, in (0, 1).
    #[arg(long)]
    q: f64,
    /// Poisson intensity of seeds per unit area.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams<f64>, Failure> {
        ModelParams::new(self.q, self.lambda).map_err(Failure::from)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MomentMethod {
    Closed,
    Mgf,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SummaryFormat {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Recursion,
    Plane,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Highest moment order (closed form: at most 4).
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=6))]
    max_order: u8,
    #[arg(long, value_enum, default_value_t = MomentMethod::Closed)]
    method: MomentMethod,
    /// Monte Carlo sample count (accepts forms like 1e6).
    #[arg(long, default_value = "1000000", value_parser = parse_count)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_parser = parse_workers)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    format: ReportFormat,
}

#[derive(Args)]
struct MgfArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Left-boundary height of the live zone.
    #[arg(long, default_value_t = 0.0)]
    y: f64,
    #[arg(long, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    t_max: f64,
    /// Number of equally spaced points, endpoints included.
    #[arg(long, value_parser = parse_count)]
    steps: u64,
    #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
    format: DataFormat,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Draws for the recursion engine (accepts forms like 1e6).
    #[arg(long, default_value = "1000000", value_parser = parse_count)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads; output does not depend on this.
    #[arg(long, value_parser = parse_workers)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Engine::Recursion)]
    engine: Engine,
    #[arg(long, default_value_t = 60.0)]
    window_w: f64,
    #[arg(long, default_value_t = 60.0)]
    window_h: f64,
    /// Width of the edge band whose seeds are not measured (plane engine).
    #[arg(long, default_value_t = 15.0)]
    margin: f64,
    /// Independent windows pooled by the plane engine.
    #[arg(long, default_value = "1", value_parser = parse_count)]
    replicates: u64,
    /// Write every measured length to this file, one per line.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 0.4)]
    q: f64,
    #[arg(long, default_value = "1000000", value_parser = parse_count)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_parser = parse_workers)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = SummaryFormat::Table)]
    format: SummaryFormat,
}

/// Positive integer, also written as 1e6 or 2.5e5.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return if n > 0 { Ok(n) } else { Err("must be at least 1".into()) };
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if x >= 1.0 && x.fract() == 0.0 && x <= 9.0e15 {
        Ok(x as u64)
    } else {
        Err(format!("`{s}` is not a positive integer"))
    }
}

fn parse_workers(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err("workers must be a positive integer".into()),
    }
}

fn default_workers(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<AnalyticError> for Failure {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::InvalidParams(_)
            | AnalyticError::InvalidConfig(_)
            | AnalyticError::OrderOutOfRange { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<MonteCarloError> for Failure {
    fn from(e: MonteCarloError) -> Self {
        match e {
            MonteCarloError::Params(a) => a.into(),
            MonteCarloError::InvalidConfig(_) => Failure::Usage(e.to_string()),
            MonteCarloError::Pool(_) => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<ValidationError> for Failure {
    fn from(e: ValidationError) -> Self {
        match e {
            ValidationError::Analytic(a) => a.into(),
            ValidationError::MonteCarlo(m) => m.into(),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

/// Shortest round-trip decimal form, switching to exponent notation for very
/// small or large magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn cmd_moments(args: &MomentsArgs) -> Result<String, Failure> {
    let params = args.model.params()?;
    let max_order = args.max_order as usize;
    let report = match args.method {
        MomentMethod::Closed => {
            if max_order > 4 {
                return Err(Failure::Usage(
                    "closed-form moments are available for orders 1-4; use --method mgf or mc for higher orders"
                        .into(),
                ));
            }
            closed_moments(&params, &(1..=max_order).collect::<Vec<_>>())?
        }
        MomentMethod::Mgf => mgf_moments(&params, max_order, &ToleranceConfig::default())?,
        MomentMethod::Mc => {
            let cfg = SimConfig::new(params, args.samples, args.seed, default_workers(args.workers))?;
            let (stats, _) = run_monte_carlo_with_samples(&cfg)?;
            monte_carlo_report(params, &stats, max_order)
        }
    };
    Ok(match args.format {
        ReportFormat::Json => to_json(&report),
        ReportFormat::Csv => moments_csv(&report),
        ReportFormat::Table => moments_table(&report),
    })
}

fn monte_carlo_report(params: ModelParams<f64>, stats: &SimStats, max_order: usize) -> MomentReport<f64> {
    MomentReport {
        params,
        entries: (1..=max_order)
            .map(|k| MomentEntry {
                order: k,
                value: stats.raw_moment(k),
                method: Method::MonteCarlo,
                std_error: Some(stats.std_error(k)),
            })
            .collect(),
    }
}

fn moments_csv(report: &MomentReport<f64>) -> String {
    let mut out = String::from("order,value,method,std_error\n");
    for e in &report.entries {
        let _ = writeln!(out, "{},{},{},{}", e.order, num(e.value), e.method.as_str(), opt(e.std_error));
    }
    out
}

fn moments_table(report: &MomentReport<f64>) -> String {
    let mut out = format!(
        "q = {}, lambda = {}\n{:<6} {:<24} {:<15} {}\n",
        report.params.q(),
        report.params.lambda(),
        "order",
        "value",
        "method",
        "std_error"
    );
    for e in &report.entries {
        let se = e.std_error.map_or_else(|| "-".to_string(), num);
        let _ = writeln!(out, "{:<6} {:<24} {:<15} {}", e.order, num(e.value), e.method.as_str(), se);
    }
    out
}

#[derive(Serialize)]
struct MgfCurveOutput {
    q: f64,
    lambda: f64,
    y: f64,
    points: Vec<MgfPoint<f64>>,
}

fn cmd_mgf(args: &MgfArgs) -> Result<String, Failure> {
    let params = args.model.params()?;
    if !(args.t_min <= args.t_max) {
        return Err(Failure::Usage("--t-min must not exceed --t-max".into()));
    }
    if args.steps < 2 && args.t_min != args.t_max {
        return Err(Failure::Usage("--steps must be at least 2 for a non-empty range".into()));
    }
    let n = args.steps as usize;
    let last = (n.max(2) - 1) as f64;
    // Weighted endpoints hit t = 0 exactly on symmetric ranges.
    let points = (0..n)
        .map(|i| {
            let w = i as f64;
            let t = if n == 1 { args.t_min } else { (args.t_min * (last - w) + args.t_max * w) / last };
            mgf_scaled(&params, t, args.y)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match args.format {
        DataFormat::Json => to_json(&MgfCurveOutput {
            q: params.q(),
            lambda: params.lambda(),
            y: args.y,
            points,
        }),
        DataFormat::Csv => {
            let mut out = String::from("t,y,value,converges\n");
            for p in &points {
                let _ = writeln!(out, "{},{},{},{}", num(p.t), num(p.y), num(p.value), p.converges);
            }
            out
        }
    })
}

#[derive(Serialize)]
struct WindowInfo {
    width: f64,
    height: f64,
    margin: f64,
    replicates: u64,
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    engine: &'static str,
    params: ModelParams<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<WindowInfo>,
    #[serde(flatten)]
    stats: &'a SimStats,
}

fn cmd_simulate(args: &SimulateArgs) -> Result<String, Failure> {
    let params = args.model.params()?;
    let workers = default_workers(args.workers);
    let (engine, window, (stats, lengths)) = match args.engine {
        Engine::Recursion => {
            let cfg = SimConfig::new(params, args.samples, args.seed, workers)?;
            ("recursion", None, run_monte_carlo_with_samples(&cfg)?)
        }
        Engine::Plane => {
            let cfg = PlaneConfig::new(params, args.window_w, args.window_h, args.margin, args.seed)?
                .with_replicates(args.replicates)?
                .with_workers(workers)?;
            let window = WindowInfo {
                width: args.window_w,
                height: args.window_h,
                margin: args.margin,
                replicates: args.replicates,
            };
            ("plane", Some(window), simulate_plane_with_samples(&cfg)?)
        }
    };
    if let Some(path) = &args.dump {
        let mut text = String::with_capacity(lengths.len() * 20);
        for &x in &lengths {
            let _ = writeln!(text, "{}", num(x));
        }
        std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write dump file {}: {e}", path.display())))?;
    }
    Ok(to_json(&SimulateOutput {
        engine,
        params,
        window,
        stats: &stats,
    }))
}

fn validation_table(r: &ValidationReport) -> String {
    let mut out = format!(
        "q = {}, lambda = {}, samples = {}, seed = {}\n",
        r.params.q(),
        r.params.lambda(),
        r.samples,
        r.seed
    );
    let _ = writeln!(
        out,
        "{:<6} {:<22} {:<22} {:<22} {:<12} {:<10} agree",
        "order", "closed", "mgf-derivative", "monte-carlo", "mc-se", "table"
    );
    for row in &r.rows {
        let dash = |x: Option<f64>| x.map_or_else(|| "-".to_string(), num);
        let _ = writeln!(
            out,
            "{:<6} {:<22} {:<22} {:<22} {:<12.4e} {:<10} {}",
            row.order,
            dash(row.closed_value),
            num(row.mgf_value),
            num(row.mc_value),
            row.mc_std_error,
            dash(row.table_value),
            if row.agreement_flag { "yes" } else { "NO" }
        );
    }
    let s = &r.residual_summary;
    let _ = writeln!(
        out,
        "max ODE residual: {:.3e} (tol {:.0e})\nmax integral-equation residual: {:.3e} (tol {:.0e})",
        s.max_ode_residual, s.ode_residual_tol, s.max_integral_equation_residual, s.residual_tol
    );
    if let Some(sc) = &r.special_case {
        let _ = writeln!(
            out,
            "q = 1/2 closed form vs general MGF: max |diff| {:.3e} over {} points (tol {:.0e}) {}",
            sc.max_abs_difference,
            sc.points,
            sc.tolerance,
            if sc.pass { "ok" } else { "FAIL" }
        );
    }
    let _ = writeln!(
        out,
        "verdict: {}",
        if r.verdict == Verdict::Pass { "PASS" } else { "FAIL" }
    );
    out
}

fn cmd_validate(args: &ValidateArgs) -> Result<(String, bool), Failure> {
    let params = ModelParams::new(args.q, 1.0)?;
    let cfg = ValidationConfig::new(params, args.samples, args.seed, default_workers(args.workers));
    let report = validate(&cfg)?;
    let text = match args.format {
        SummaryFormat::Json => to_json(&report),
        SummaryFormat::Table => validation_table(&report),
    };
    Ok((text, report.verdict == Verdict::Pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Moments(a) => cmd_moments(a).map(|s| (s, true)),
        Command::Mgf(a) => cmd_mgf(a).map(|s| (s, true)),
        Command::Simulate(a) => cmd_simulate(a).map(|s| (s, true)),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok((text, pass)) => {
            print!("{text}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
