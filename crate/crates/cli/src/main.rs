//! `ivsqrt`: data emission for the inverse-square-root two-state model.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 solver or I/O failure. The special-function policy can be overridden
//! with `IVSQRT_EVAL_POLICY=rel_tol=1e-12,max_terms=1000,asymptotic_threshold=30`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ivsqrt::closed_form::{
    approx_strong_field, approx_weak_field, scattering_a2_at_zero, AmplitudePair, AnalyticSolution,
};
use ivsqrt::field::{c1_normalization, crossing_time, detuning, dimensionless_params, FieldConfig};
use ivsqrt::oracle::{integrate_two_state, IntegrationSpec};
use ivsqrt::verify::{list_criteria, run_criterion, CriterionReport};
use ivsqrt::{EvalPolicy, ModelError};
use num_complex::Complex64;
use rayon::prelude::*;

use table::{Format, Table};

const POLICY_ENV: &str = "IVSQRT_EVAL_POLICY";

#[derive(Parser)]
#[command(
    name = "ivsqrt",
    version,
    about = "Inverse-square-root level-crossing two-state model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitudes and populations on a uniform time grid
    Solve(SolveArgs),
    /// Data behind figures 1-4
    Figure(FigureArgs),
    /// Scattering quantities at t = 0 over a parameter grid
    Scan(ScanArgs),
    /// Run the acceptance criteria
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; standard output when omitted
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Analytic,
    Ode,
    Both,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SolveArgs {
    #[arg(long)]
    u0: f64,
    #[arg(long)]
    d0: f64,
    #[arg(long)]
    d1: f64,
    /// Initial amplitude of the first state, e.g. 1, 0.6, 0.8i or 0.6-0.8i
    #[arg(long, value_parser = parse_complex, default_value = "1")]
    a1: Complex64,
    #[arg(long, value_parser = parse_complex, default_value = "0")]
    a2: Complex64,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = 0.1)]
    dt_out: f64,
    #[arg(long, value_enum, default_value = "analytic")]
    method: Method,
    /// Relative tolerance of the numerical integration
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct FigureArgs {
    /// Figure number, 1 to 4
    #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
    id: u8,
    /// Field amplitude for figures 1 and 2
    #[arg(long, default_value_t = 1.0)]
    u0: f64,
    /// Time range of figure 1
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, default_value_t = 0.05)]
    dt_out: f64,
    /// Delta0 grid of figure 2 as min:max:points
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "0.25:8:32")]
    d0_range: Range,
    /// Delta1 grid of figure 2 as min:max:points
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-8:8:33")]
    d1_range: Range,
    /// Logarithmic U0 grid of figures 3 and 4 as min:max:points
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    u0_range: Option<Range>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ScanArgs {
    /// U0 values as a single number or min:max:points
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "1")]
    u0: Range,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "0.25:8:32")]
    d0: Range,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-8:8:33")]
    d1: Range,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    /// List the criteria without running them
    #[arg(long)]
    list: bool,
    /// Run only these criteria (repeatable), e.g. --criterion AC3
    #[arg(long)]
    criterion: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

/// Inclusive grid of `points` values from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Range {
    min: f64,
    max: f64,
    points: usize,
}

impl Range {
    fn linear(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.min + step * i as f64).collect()
    }

    fn logarithmic(&self) -> Vec<f64> {
        let (a, b) = (self.min.log10(), self.max.log10());
        if self.points == 1 {
            return vec![self.min];
        }
        (0..self.points)
            .map(|i| 10f64.powf(a + (b - a) * i as f64 / (self.points - 1) as f64))
            .collect()
    }
}

impl std::fmt::Display for Range {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.points)
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    let range = match parts.as_slice() {
        [v] => {
            let v = num(v)?;
            Range {
                min: v,
                max: v,
                points: 1,
            }
        }
        [a, b, n] => Range {
            min: num(a)?,
            max: num(b)?,
            points: n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?,
        },
        _ => return Err("expected a number or min:max:points".into()),
    };
    if range.points == 0 || !range.min.is_finite() || !range.max.is_finite() {
        return Err("need at least one point and finite bounds".into());
    }
    Ok(range)
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.trim().parse::<Complex64>().map_err(|e| format!("`{s}`: {e}"))
}

enum Failure {
    Verification,
    Input(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Input(_) => 2,
            Failure::Solver(_) => 3,
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::InvalidConfig(_) | ModelError::Convention(_) => Failure::Input(e.to_string()),
            _ => Failure::Solver(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Solver(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Solver(m) => eprintln!("solver failure: {m}"),
                Failure::Verification => {}
            }
            ExitCode::from(f.code())
        }
    }
}

fn eval_policy() -> Result<EvalPolicy, Failure> {
    match std::env::var(POLICY_ENV) {
        Ok(s) => s.parse().map_err(|e| Failure::Input(format!("{POLICY_ENV}: {e}"))),
        Err(_) => Ok(EvalPolicy::default()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let policy = eval_policy()?;
    match cli.command {
        Command::Solve(args) => {
            let table = cmd_solve(&args, &policy)?;
            emit(&table, &args.out)
        }
        Command::Figure(args) => {
            let table = cmd_figure(&args, &policy)?;
            emit(&table, &args.out)
        }
        Command::Scan(args) => {
            let table = cmd_scan(&args, &policy)?;
            emit(&table, &args.out)
        }
        Command::Verify(args) => cmd_verify(&args, &policy),
    }
}

fn emit(table: &Table, out: &OutputArgs) -> Result<(), Failure> {
    match &out.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(&mut w, out.format)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(&mut w, out.format)?;
        }
    }
    Ok(())
}

fn policy_string(p: &EvalPolicy) -> String {
    format!(
        "rel_tol={:e},max_terms={},asymptotic_threshold={}",
        p.rel_tol, p.max_terms, p.asymptotic_threshold
    )
}

fn probability(a: Complex64) -> f64 {
    a.norm_sqr().clamp(0.0, 1.0)
}

fn cmd_solve(args: &SolveArgs, policy: &EvalPolicy) -> Result<Table, Failure> {
    let cfg = FieldConfig::new(args.u0, args.d0, args.d1)?;
    if !(args.dt_out > 0.0) || !(args.t_max > 0.0) || !args.t_max.is_finite() {
        return Err(Failure::Input("need t_max > 0 and dt_out > 0".into()));
    }
    let initial = AmplitudePair::new(args.a1, args.a2);
    if (initial.norm_sqr() - 1.0).abs() > 1e-10 {
        return Err(Failure::Input(format!(
            "initial state must be normalized, |a1|^2 + |a2|^2 = {}",
            initial.norm_sqr()
        )));
    }
    let grid =
        IntegrationSpec::uniform(0.0, args.t_max, args.dt_out).with_tolerances(args.rel_tol, 1e-2 * args.rel_tol);
    let analytic = match args.method {
        Method::Ode => None,
        _ => {
            let sol = AnalyticSolution::from_initial(&initial, &cfg, policy)?;
            Some(sol.trajectory(&grid.output_grid)?)
        }
    };
    let numeric = match args.method {
        Method::Analytic => None,
        _ => Some(integrate_two_state(&cfg, &initial, &grid)?),
    };

    let mut columns = vec!["t", "re_a1", "im_a1", "re_a2", "im_a2", "p1", "p2", "norm"];
    if args.method == Method::Both {
        columns.push("abs_diff_a2");
    }
    let mut table = Table::new(&columns);
    table.meta("command", "solve");
    table.meta("u0", args.u0);
    table.meta("delta0", args.d0);
    table.meta("delta1", args.d1);
    table.meta("a1", args.a1);
    table.meta("a2", args.a2);
    table.meta("t_max", args.t_max);
    table.meta("dt_out", args.dt_out);
    table.meta(
        "method",
        args.method.to_possible_value().expect("no skipped variants").get_name(),
    );
    table.meta("ode_rel_tol", format!("{:e}", args.rel_tol));
    table.meta("eval_policy", policy_string(policy));
    if let Some(tr) = &numeric {
        table.meta("ode_norm_drift", format!("{:e}", tr.norm_drift));
    }
    for (i, t) in grid.output_grid.iter().enumerate() {
        let primary = match (&analytic, &numeric) {
            (Some(a), _) => a[i],
            (None, Some(n)) => n.states[i],
            (None, None) => unreachable!(),
        };
        let mut row = vec![
            *t,
            primary.a1.re,
            primary.a1.im,
            primary.a2.re,
            primary.a2.im,
            probability(primary.a1),
            probability(primary.a2),
            primary.norm_sqr(),
        ];
        if let (Some(a), Some(n)) = (&analytic, &numeric) {
            row.push((a[i].a2 - n.states[i].a2).norm());
        }
        table.push(row);
    }
    Ok(table)
}

fn cmd_figure(args: &FigureArgs, policy: &EvalPolicy) -> Result<Table, Failure> {
    let mut table = match args.id {
        1 => figure1(args)?,
        2 => scan_table(&[args.u0], &args.d0_range.linear(), &args.d1_range.linear(), policy),
        3 => figure3(&args.u0_range.unwrap_or(Range {
            min: 1e-2,
            max: 1e3,
            points: 101,
        }))?,
        _ => figure4(
            &args.u0_range.unwrap_or(Range {
                min: 1e-2,
                max: 1e2,
                points: 81,
            }),
            policy,
        )?,
    };
    table.meta("figure", args.id);
    match args.id {
        1 => {
            table.meta("u0", args.u0);
            table.meta("t_max", args.t_max);
            table.meta("dt_out", args.dt_out);
        }
        2 => {
            table.meta("u0", args.u0);
            table.meta("delta0_range", args.d0_range);
            table.meta("delta1_range", args.d1_range);
        }
        _ => {
            table.meta("delta0", 4);
            table.meta("delta1", -5);
        }
    }
    table.meta("eval_policy", policy_string(policy));
    Ok(table)
}

/// Detuning curves for Δ₀ = 4 and Δ₁ ∈ {5, 3, 1, 0, −1, −3, −5}; rows with
/// `crossing` = 1 mark the resonance crossings.
fn figure1(args: &FigureArgs) -> Result<Table, Failure> {
    if !(args.dt_out > 0.0 && args.t_max > args.dt_out) {
        return Err(Failure::Input("need t_max > dt_out > 0".into()));
    }
    let mut table = Table::new(&["delta0", "delta1", "t", "u", "detuning", "crossing"]);
    let n = (args.t_max / args.dt_out + 1e-9).floor() as usize;
    for d1 in [5.0, 3.0, 1.0, 0.0, -1.0, -3.0, -5.0] {
        let cfg = FieldConfig::new(args.u0, 4.0, d1)?;
        for i in 1..=n {
            let t = args.dt_out * i as f64;
            table.push(vec![4.0, d1, t, args.u0, detuning(t, &cfg)?, 0.0]);
        }
        if let Some(t0) = crossing_time(&cfg) {
            table.push(vec![4.0, d1, t0, args.u0, detuning(t0, &cfg)?, 1.0]);
        }
    }
    table.meta("command", "figure");
    Ok(table)
}

fn figure3(range: &Range) -> Result<Table, Failure> {
    let (d0, d1): (f64, f64) = (4.0, -5.0);
    let mut table = Table::new(&[
        "u0",
        "nu0",
        "xi0",
        "nu0_small_u0",
        "nu0_large_u0",
        "xi0_small_u0",
        "xi0_large_u0",
    ]);
    table.meta("command", "figure");
    for u0 in range.logarithmic() {
        let d = dimensionless_params(&FieldConfig::new(u0, d0, d1)?);
        table.push(vec![
            u0,
            d.nu0,
            d.xi0,
            2.0 * d1 * d1 * u0 * u0 / d0.powi(3),
            d1 * d1 / 4.0 / u0,
            d1 / (2.0 * d0).sqrt(),
            d0 * d1 / 4.0 / u0.powf(1.5),
        ]);
    }
    Ok(table)
}

fn figure4(range: &Range, policy: &EvalPolicy) -> Result<Table, Failure> {
    let mut table = Table::new(&["u0", "p2_exact", "p2_weak_field", "p2_strong_field"]);
    table.meta("command", "figure");
    let rows: Result<Vec<Vec<f64>>, ModelError> = range
        .logarithmic()
        .par_iter()
        .map(|&u0| {
            let cfg = FieldConfig::new(u0, 4.0, -5.0)?;
            Ok(vec![
                u0,
                scattering_a2_at_zero(&cfg, policy)?.p2.clamp(0.0, 1.0),
                probability(approx_weak_field(&cfg)?),
                probability(approx_strong_field(&cfg)?),
            ])
        })
        .collect();
    for row in rows? {
        table.push(row);
    }
    Ok(table)
}

/// One row per (U₀, Δ₀, Δ₁); scattering columns are NaN where they are undefined (Δ₀ ≤ 0).
fn scan_table(u0s: &[f64], d0s: &[f64], d1s: &[f64], policy: &EvalPolicy) -> Table {
    let cells: Vec<(f64, f64, f64)> = u0s
        .iter()
        .flat_map(|&u| d0s.iter().flat_map(move |&a| d1s.iter().map(move |&b| (u, a, b))))
        .collect();
    let rows: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|&(u0, d0, d1)| {
            let cfg = match FieldConfig::new(u0, d0, d1) {
                Ok(cfg) => cfg,
                Err(_) => return vec![u0, d0, d1, f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN],
            };
            let d = dimensionless_params(&cfg);
            let c1 = c1_normalization(&cfg).unwrap_or(f64::NAN);
            let (p1, p2) = match scattering_a2_at_zero(&cfg, policy) {
                Ok(s) => (s.p1.clamp(0.0, 1.0), s.p2.clamp(0.0, 1.0)),
                Err(_) => (f64::NAN, f64::NAN),
            };
            vec![
                u0,
                d0,
                d1,
                crossing_time(&cfg).unwrap_or(f64::NAN),
                d.nu0,
                d.xi0,
                c1,
                p1,
                p2,
            ]
        })
        .collect();
    let mut table = Table::new(&["u0", "delta0", "delta1", "t0", "nu0", "xi0", "c1", "p1_0", "p2_0"]);
    for row in rows {
        table.push(row);
    }
    table
}

fn cmd_scan(args: &ScanArgs, policy: &EvalPolicy) -> Result<Table, Failure> {
    let u0s = args.u0.linear();
    if u0s.iter().any(|u| !(*u > 0.0)) {
        return Err(Failure::Input("U0 must be positive".into()));
    }
    let mut table = scan_table(&u0s, &args.d0.linear(), &args.d1.linear(), policy);
    table.metadata.push(("command".into(), "scan".into()));
    table.meta("u0", args.u0);
    table.meta("delta0", args.d0);
    table.meta("delta1", args.d1);
    table.meta("eval_policy", policy_string(policy));
    Ok(table)
}

fn cmd_verify(args: &VerifyArgs, policy: &EvalPolicy) -> Result<(), Failure> {
    let all = list_criteria();
    let selected: Vec<(String, String)> = if args.criterion.is_empty() {
        all
    } else {
        let mut chosen = Vec::new();
        for id in &args.criterion {
            match all.iter().find(|(c, _)| c.eq_ignore_ascii_case(id)) {
                Some(entry) => chosen.push(entry.clone()),
                None => return Err(Failure::Input(format!("unknown criterion `{id}`"))),
            }
        }
        chosen
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.list {
        match args.format {
            ReportFormat::Text => {
                for (id, title) in &selected {
                    writeln!(out, "{id} {title}")?;
                }
            }
            ReportFormat::Json => {
                let list: Vec<_> = selected
                    .iter()
                    .map(|(id, title)| serde_json::json!({"id": id, "title": title}))
                    .collect();
                serde_json::to_writer_pretty(&mut out, &list).map_err(io::Error::from)?;
                writeln!(out)?;
            }
        }
        return Ok(());
    }
    let reports: Vec<CriterionReport> = selected
        .par_iter()
        .map(|(id, _)| run_criterion(id, policy).expect("listed criterion"))
        .collect();
    match args.format {
        ReportFormat::Text => {
            for r in &reports {
                let status = if r.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {} {}: {}", r.id, r.title, r.detail)?;
            }
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &reports).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
