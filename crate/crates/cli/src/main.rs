//! `fracineq`: checks, sweeps, constant tables and limit studies for the
//! exponential-kernel fractional inequalities.
//!
//! Exit codes: 0 holds/ok, 1 usage or domain error, 2 violation or failure,
//! 3 inconclusive.

mod config;
mod output;
mod selftest;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fracineq::inequality::{check, classical_limit_sweep, Companion, InequalityKind, Verdict};
use fracineq::kernel::{alpha_for_scale, normalized_constants};
use fracineq::{FracOrder, KernelScale};

use config::RunConfig;
use output::{emit, num, Table};

#[derive(Parser)]
#[command(name = "fracineq", version, about = "Exponential-kernel fractional inequality checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Add a `# generated_at=` line after the CSV schema line.
    #[arg(long)]
    timestamp: bool,
    /// `key=value` overrides applied after the config file.
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check one inequality for one function (pair) and write a JSON report.
    Check(Common),
    /// Check a corpus over grids of orders and intervals; writes CSV.
    Sweep(Common),
    /// Tabulate the normalised constants over a kernel-scale or order grid.
    Constants(Common),
    /// Track a fractional term as the order approaches 1.
    Limits(Common),
    /// Run the reduced invariant suite.
    Selftest(Common),
}

struct Failure {
    code: u8,
    message: String,
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure { code: 1, message }
    }
}

impl From<fracineq::Error> for Failure {
    fn from(e: fracineq::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: format!("i/o error: {e}") }
    }
}

type Outcome = Result<u8, Failure>;

fn load(common: &Common) -> Result<(RunConfig, Option<PathBuf>), Failure> {
    let cfg = RunConfig::load(common.config.as_deref(), &common.overrides)?;
    let out = common.out.clone().or_else(|| cfg.out());
    Ok((cfg, out))
}

fn companion_args(cfg: &RunConfig, kind: InequalityKind, iv: fracineq::Interval) -> Result<Partner, Failure> {
    Ok(match kind {
        InequalityKind::Fejer => Partner::Weight(
            cfg.weight(iv)?.ok_or_else(|| "Fejér checks need a 'weight'".to_string())?,
        ),
        k if k.needs_partner() => Partner::Function(cfg.require_function("v")?),
        _ => Partner::None,
    })
}

enum Partner {
    None,
    Weight(fracineq::WeightSpec),
    Function(fracineq::FunctionSpec),
}

impl Partner {
    fn companion(&self) -> Companion<'_> {
        match self {
            Partner::None => Companion::None,
            Partner::Weight(w) => Companion::Weight(w),
            Partner::Function(f) => Companion::Function(f),
        }
    }
}

fn cmd_check(common: &Common) -> Outcome {
    let (cfg, out) = load(common)?;
    let kind = cfg.inequality()?;
    let u = cfg.require_function("u")?;
    let iv = cfg.interval()?;
    let partner = companion_args(&cfg, kind, iv)?;
    let report = check(kind, &u, partner.companion(), cfg.alpha()?, iv, &cfg.check_config()?)?;
    let mut line = serde_json::to_vec(&report).map_err(|e| format!("serialising report: {e}"))?;
    line.push(b'\n');
    emit(out.as_deref(), &line)?;
    Ok(match report.verdict {
        Verdict::Holds => 0,
        Verdict::Violated => 2,
        Verdict::Inconclusive => 3,
    })
}

fn thread_count() -> Result<usize, Failure> {
    match std::env::var("FRACINEQ_THREADS") {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("FRACINEQ_THREADS must be a positive integer, got '{v}'").into()),
        },
    }
}

fn cmd_sweep(common: &Common) -> Outcome {
    let (cfg, out) = load(common)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| format!("thread pool: {e}"))?;
    let (table, s) = pool.install(|| sweep::run(&cfg))?;
    emit(out.as_deref(), &table.render(common.timestamp)?)?;
    eprintln!(
        "sweep: {} rows, {} holds, {} violated, {} inconclusive, {} screen_failed, {} errors",
        s.rows, s.holds, s.violated, s.inconclusive, s.screen_failed, s.errors
    );
    Ok(s.exit_code() as u8)
}

fn cmd_constants(common: &Common) -> Outcome {
    let (cfg, out) = load(common)?;
    let iv = cfg.interval()?;
    let orders: Vec<FracOrder> = if cfg.has("alphas") || cfg.has("alpha") {
        cfg.alphas(&[])?.into_iter().map(FracOrder::new).collect::<Result<_, _>>()?
    } else {
        cfg.a_grid()?.into_iter().map(|a| alpha_for_scale(KernelScale::new(a).unwrap(), iv)).collect()
    };
    let mut table = Table::new(
        "fracineq-constants v1",
        &[
            "A",
            "alpha",
            "midpoint",
            "dragomir",
            "pachpatte_p2",
            "pachpatte_p1",
            "midpoint_branch",
            "dragomir_branch",
            "pachpatte_branch",
        ],
    );
    for alpha in orders {
        let r = normalized_constants(alpha, iv);
        table.push(vec![
            num(r.kernel_scale),
            num(r.alpha),
            num(r.midpoint),
            num(r.dragomir),
            num(r.pachpatte_p2),
            num(r.pachpatte_p1),
            r.midpoint_branch.as_str().into(),
            r.dragomir_branch.as_str().into(),
            r.pachpatte_branch.as_str().into(),
        ]);
    }
    emit(out.as_deref(), &table.render(common.timestamp)?)?;
    Ok(0)
}

fn cmd_limits(common: &Common) -> Outcome {
    let (cfg, out) = load(common)?;
    let kind = cfg.inequality()?;
    let u = cfg.require_function("u")?;
    let iv = cfg.interval()?;
    let partner = companion_args(&cfg, kind, iv)?;
    let alphas = cfg.alphas(&[0.9, 0.99, 0.999])?;
    let s = classical_limit_sweep(kind, &u, partner.companion(), iv, &alphas, &cfg.check_config()?)?;
    let mut table = Table::new("fracineq-limits v1", &["alpha", "term", "value", "classical", "abs_error"]);
    for r in &s.rows {
        table.push(vec![num(r.alpha), s.term.clone(), num(r.value), num(r.classical), num(r.abs_error)]);
    }
    emit(out.as_deref(), &table.render(common.timestamp)?)?;
    if s.monotone {
        Ok(0)
    } else {
        eprintln!("limits: error column is not decreasing");
        Ok(2)
    }
}

fn cmd_selftest(common: &Common) -> Outcome {
    let (cfg, out) = load(common)?;
    let (text, code) = selftest::run(&cfg)?;
    emit(out.as_deref(), text.as_bytes())?;
    Ok(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Check(c) => cmd_check(c),
        Command::Sweep(c) => cmd_sweep(c),
        Command::Constants(c) => cmd_constants(c),
        Command::Limits(c) => cmd_limits(c),
        Command::Selftest(c) => cmd_selftest(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("fracineq: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
