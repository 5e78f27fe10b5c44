//! Command-line frontend: evaluate means, print moments, compute diagonal
//! derivatives with oracle residuals, run equality certifications and the
//! Gini/Stolarsky scan.
//!
//! Exit codes: 0 success, 1 certification failure, 2 configuration or domain
//! error. All numbers are printed in Rust's shortest round-trip form (full
//! f64 precision, `.` decimal separator), so identical configurations yield
//! byte-identical output.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gqmean::equality::{
    self, CheckOptions, Classification, EqualityReport, Verdict,
};
use gqmean::generator::{GeneratorPair, PairSpec};
use gqmean::measure::{pi_moments, Measure, MomentVector, PiParams};
use gqmean::{diagonal, mean, MeanSpec};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gqmean",
    about = "Two-variable functional means: evaluation, moments, diagonal derivatives, equality certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mean at a pair of points.
    Eval(EvalArgs),
    /// Print raw and centralized moments of a measure or of pi(ell, p).
    Moments(MomentsArgs),
    /// Diagonal derivatives with closed-form/oracle residuals, as CSV.
    Diagonal(DiagonalArgs),
    /// Certify equality of two generator pairs (JSON report).
    Equality(EqualityArgs),
    /// Scan Gini against Stolarsky means and classify coincidences, as CSV.
    Scan(ScanArgs),
    /// Certify the builtin intersection suite.
    Demo(DemoArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[command(subcommand)]
    which: EvalCommand,
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Power mean H_a.
    Power {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        x: f64,
        y: f64,
    },
    /// Gini mean G_{a,b}.
    Gini {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        x: f64,
        y: f64,
    },
    /// Stolarsky mean S_{a,b}.
    Stolarsky {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        x: f64,
        y: f64,
    },
    /// Any mean described by a MeanSpec JSON file.
    Spec { spec: PathBuf, x: f64, y: f64 },
    /// Generalized mean from a pair file and a measure file.
    Generalized {
        pair: PathBuf,
        measure: PathBuf,
        x: f64,
        y: f64,
    },
}

#[derive(Args)]
struct MomentsArgs {
    /// Measure JSON file; omit when using --ell/--p.
    measure: Option<PathBuf>,
    /// Use the pi(ell, p) moment family instead of a measure file.
    #[arg(long, requires = "p")]
    ell: Option<f64>,
    #[arg(long, requires = "ell")]
    p: Option<f64>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagonalArgs {
    pair: PathBuf,
    measure: PathBuf,
    /// Evaluation points (repeatable).
    #[arg(long = "x", required = true, allow_negative_numbers = true)]
    xs: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EqualityArgs {
    #[command(subcommand)]
    which: EqualityCommand,
}

#[derive(Subcommand)]
enum EqualityCommand {
    /// Bajraktarevic-vs-Cauchy condition suite for (pair_f, pair_h).
    BajraktarevicCauchy {
        pair_f: PathBuf,
        pair_h: PathBuf,
        #[command(flatten)]
        opts: ToleranceArgs,
    },
    /// Five-condition chain for two pairs under one symmetric measure.
    Chain {
        pair1: PathBuf,
        pair2: PathBuf,
        measure: PathBuf,
        #[command(flatten)]
        opts: ToleranceArgs,
    },
}

#[derive(Args)]
struct ToleranceArgs {
    /// Mean-comparison tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Mean-comparison lattice side override.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Lower bound of both parameter axes.
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    lo: f64,
    /// Upper bound of both parameter axes.
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    hi: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 21)]
    grid: usize,
    /// Residual threshold for a hit.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Restrict the Gini side to one cell "a,b".
    #[arg(long)]
    gini_cell: Option<String>,
    /// Restrict the Stolarsky side to one cell "c,d".
    #[arg(long)]
    stolarsky_cell: Option<String>,
    /// Panel of evaluation points "x,y;x,y;...".
    #[arg(long)]
    panel: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Machine-readable reports instead of summary lines.
    #[arg(long)]
    json: bool,
    /// Append a deliberately failing instance.
    #[arg(long)]
    with_negative_control: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Eval(args) => cmd_eval(args),
        Command::Moments(args) => cmd_moments(args),
        Command::Diagonal(args) => cmd_diagonal(args),
        Command::Equality(args) => cmd_equality(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Demo(args) => cmd_demo(args),
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_pair(path: &Path) -> Result<GeneratorPair> {
    let spec: PairSpec = serde_json::from_value(read_json(path)?)
        .with_context(|| format!("pair schema in {}", path.display()))?;
    GeneratorPair::from_spec(&spec).with_context(|| format!("building pair from {}", path.display()))
}

fn load_measure(path: &Path) -> Result<Measure> {
    serde_json::from_value(read_json(path)?)
        .with_context(|| format!("measure schema in {}", path.display()))
}

fn write_out(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode> {
    let value = match args.which {
        EvalCommand::Power { a, x, y } => mean::eval_power(a, x, y)?,
        EvalCommand::Gini { a, b, x, y } => mean::eval_gini(a, b, x, y)?,
        EvalCommand::Stolarsky { a, b, x, y } => mean::eval_stolarsky(a, b, x, y)?,
        EvalCommand::Spec { spec, x, y } => {
            let spec = MeanSpec::from_json(&read_json(&spec)?)?;
            spec.eval(x, y)?
        }
        EvalCommand::Generalized { pair, measure, x, y } => {
            let pair = load_pair(&pair)?;
            let measure = load_measure(&measure)?;
            mean::eval_generalized(&pair, &measure, x, y)?
        }
    };
    println!("{value}");
    Ok(ExitCode::SUCCESS)
}

fn moments_table(m: &MomentVector) -> String {
    let mut out = String::from("order,raw,central\n");
    for k in 0..=8 {
        let _ = writeln!(out, "{k},{},{}", m.raw(k), m.central(k));
    }
    out
}

fn cmd_moments(args: MomentsArgs) -> Result<ExitCode> {
    let moments = match (&args.measure, args.ell, args.p) {
        (Some(path), None, None) => load_measure(path)?.moments(),
        (None, Some(ell), Some(p)) => pi_moments(PiParams::new(ell, p)?, 8)?,
        _ => bail!("provide either a measure file or both --ell and --p"),
    };
    let content = if args.json {
        format!("{}\n", serde_json::to_string_pretty(&moments)?)
    } else {
        moments_table(&moments)
    };
    write_out(args.out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_diagonal(args: DiagonalArgs) -> Result<ExitCode> {
    let pair = load_pair(&args.pair)?;
    let measure = load_measure(&args.measure)?;
    let mut csv = String::from("x,d2,d4,d6,d8,res2,res4,res6,res8\n");
    for &x in &args.xs {
        let closed = diagonal::diagonal_derivatives(&pair, &measure, x)?;
        let oracle = diagonal::implicit_series_oracle(&pair, &measure, x)?;
        let _ = writeln!(
            csv,
            "{x},{},{},{},{},{:e},{:e},{:e},{:e}",
            closed.d2,
            closed.d4,
            closed.d6,
            closed.d8,
            (closed.d2 - oracle.d2).abs(),
            (closed.d4 - oracle.d4).abs(),
            (closed.d6 - oracle.d6).abs(),
            (closed.d8 - oracle.d8).abs(),
        );
    }
    write_out(args.out.as_ref(), &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn check_options(tol: Option<f64>, grid: Option<usize>) -> Result<CheckOptions> {
    let mut opts = CheckOptions::default();
    if let Some(t) = tol {
        if t <= 0.0 {
            bail!("--tol must be positive, got {t}");
        }
        opts.mean_tol = t;
    }
    if let Some(g) = grid {
        if g < 2 {
            bail!("--grid must be at least 2, got {g}");
        }
        opts.mean_grid = g;
    }
    Ok(opts)
}

fn report_exit(report: &EqualityReport, out: Option<&PathBuf>) -> Result<ExitCode> {
    let content = format!("{}\n", serde_json::to_string_pretty(report)?);
    write_out(out, &content)?;
    Ok(if report.verdict == Verdict::Equal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_equality(args: EqualityArgs) -> Result<ExitCode> {
    match args.which {
        EqualityCommand::BajraktarevicCauchy { pair_f, pair_h, opts } => {
            let checked = equality::check_bajraktarevic_cauchy(
                &load_pair(&pair_f)?,
                &load_pair(&pair_h)?,
                &check_options(opts.tol, opts.grid)?,
            )?;
            report_exit(&checked, opts.out.as_ref())
        }
        EqualityCommand::Chain { pair1, pair2, measure, opts } => {
            let checked = equality::check_equality_chain(
                &load_pair(&pair1)?,
                &load_pair(&pair2)?,
                &load_measure(&measure)?,
                &check_options(opts.tol, opts.grid)?,
            )?;
            report_exit(&checked, opts.out.as_ref())
        }
    }
}

fn parse_point(text: &str) -> Result<(f64, f64)> {
    let (a, b) = text
        .split_once(',')
        .with_context(|| format!("expected \"a,b\", got {text:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode> {
    if args.grid < 2 {
        bail!("--grid must be at least 2");
    }
    let panel = match &args.panel {
        None => equality::default_scan_panel(),
        Some(text) => {
            let pts: Vec<(f64, f64)> = text
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(parse_point)
                .collect::<Result<_>>()?;
            if pts.is_empty() {
                bail!("--panel is empty");
            }
            for &(x, y) in &pts {
                if x <= 0.0 || y <= 0.0 || x == y {
                    bail!("panel points must be positive with distinct coordinates, got ({x}, {y})");
                }
            }
            pts
        }
    };
    let full = equality::parameter_grid(args.lo, args.hi, args.grid);
    let gini = match &args.gini_cell {
        Some(cell) => vec![parse_point(cell)?],
        None => full.clone(),
    };
    let stolarsky = match &args.stolarsky_cell {
        Some(cell) => vec![parse_point(cell)?],
        None => full,
    };
    let hits = equality::gini_stolarsky_scan(&gini, &stolarsky, &panel, args.tol)?;
    let mut csv = String::from("a,b,c,d,max_residual,classification\n");
    for hit in &hits {
        let class = match hit.classification {
            Classification::Power { t } => format!("power(t={t})"),
            Classification::Anomalous => "anomalous".to_string(),
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{:e},{class}",
            hit.gini.0, hit.gini.1, hit.stolarsky.0, hit.stolarsky.1, hit.max_residual
        );
    }
    write_out(args.out.as_ref(), &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_demo(args: DemoArgs) -> Result<ExitCode> {
    let opts = CheckOptions::default();
    let results = equality::intersection_demo(&equality::default_demo_suite(), &opts)?;
    let mut all_certified = results.iter().all(|r| r.certified());
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    for r in &results {
        lines.push(format!(
            "{}: {} (A_phi residual {:e})",
            r.label,
            if r.certified() { "equal" } else { "NOT CERTIFIED" },
            r.quasi_residual
        ));
        reports.push(serde_json::json!({
            "label": r.label,
            "certified": r.certified(),
            "quasiarithmetic_residual": r.quasi_residual,
            "report": r.report,
        }));
    }
    if args.with_negative_control {
        // A Gini-side pair against the arithmetic Cauchy side: must refute.
        let domain = gqmean::Interval::new(0.5, 4.0)?;
        let pair_f = GeneratorPair::power(2.0, 1.0, domain)?;
        let pair_h = GeneratorPair::quasiarithmetic(gqmean::Expr::var(), domain)?;
        let report = equality::check_bajraktarevic_cauchy(&pair_f, &pair_h, &opts)?;
        let certified = report.verdict == Verdict::Equal;
        all_certified &= certified;
        lines.push(format!(
            "negative control (x^2,x) vs (x,1): {}",
            if certified { "equal" } else { "NOT CERTIFIED" }
        ));
        reports.push(serde_json::json!({
            "label": "negative control (x^2,x) vs (x,1)",
            "certified": certified,
            "report": report,
        }));
    }
    let content = if args.json {
        format!("{}\n", serde_json::to_string_pretty(&reports)?)
    } else {
        format!("{}\n", lines.join("\n"))
    };
    write_out(args.out.as_ref(), &content)?;
    Ok(if all_certified { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
