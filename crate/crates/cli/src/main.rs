//! `shockscope`: evaluate entire solutions, run the viscous solver, probe
//! the merger construction and rerun every acceptance check.

mod commands;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use commands::{CliResult, Format, MergerRequest, Outcome, PdeRequest, SpaceTime};
use manifest::RunManifest;

/// Parallelism cap read at start-up.
const THREADS_VAR: &str = "SHOCKSCOPE_THREADS";

#[derive(Parser)]
#[command(name = "shockscope", version, about = "Burgers entire solutions, viscous shocks and shock mergers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate `u(t, x)` of the entire solution for a measure.
    Eval(EvalArgs),
    /// Frame limits and shift traces as `t → -∞`.
    Ancient(AncientArgs),
    /// Integrate `u_t + f(u)_x = u_xx` from given data.
    Pde(PdeArgs),
    /// Merger and repair diagnostics, optionally with a space-time table.
    Merger(MergerArgs),
    /// Tabulate the travelling-wave profile joining two states.
    Shock(ShockArgs),
    /// Run the acceptance checks.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct EvalArgs {
    /// Measure JSON file, or inline JSON.
    #[arg(long)]
    measure: String,
    #[arg(long, default_value_t = -25.0)]
    t0: f64,
    #[arg(long, default_value_t = 5.0)]
    t1: f64,
    #[arg(long, default_value_t = -30.0)]
    x0: f64,
    #[arg(long, default_value_t = 30.0)]
    x1: f64,
    #[arg(long, default_value_t = 101)]
    nt: usize,
    #[arg(long, default_value_t = 101)]
    nx: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct AncientArgs {
    #[arg(long)]
    measure: String,
    /// Frame speeds `c`.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    speeds: Vec<f64>,
    /// Negative times at which the frame error is measured.
    #[arg(long, value_delimiter = ',', default_value = "-100,-1000,-10000")]
    ladder: Vec<f64>,
    /// Half-width of the comparison window is `|t|^exponent`.
    #[arg(long, default_value_t = 0.5)]
    window_exponent: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct PdeArgs {
    /// `burgers`, a flux JSON file, or inline JSON.
    #[arg(long, default_value = "burgers")]
    flux: String,
    /// `const:V`, `step:L,R`, `tanh:K`, `shock:A,B` or `file:PATH`.
    #[arg(long)]
    u0: String,
    /// Length of the integration.
    #[arg(long = "T", alias = "duration")]
    duration: f64,
    #[arg(long, default_value_t = -50.0)]
    x0: f64,
    #[arg(long, default_value_t = 50.0)]
    x1: f64,
    #[arg(long, default_value_t = 2001)]
    nx: usize,
    /// Extra snapshot times; the final time is always written.
    #[arg(long, value_delimiter = ',')]
    times: Vec<f64>,
    /// End states `α < β`; enables the shift trace.
    #[arg(long, requires = "beta")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    beta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where the shift trace goes when the table is CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct MergerArgs {
    /// Schedule JSON `{"N": .., "times": [..]}`; defaults to N=10, t=(1, 200, 1e9).
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    delta: Vec<f64>,
    /// Half-width of the merge sweep; defaults to min(t_k, 100).
    #[arg(long)]
    merge_window: Option<f64>,
    #[arg(long, default_value_t = 5.0)]
    repair_window: f64,
    #[arg(long, default_value_t = 0.05)]
    merge_tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    repair_tol: f64,
    #[arg(long, requires_all = ["t1", "nt"])]
    t0: Option<f64>,
    #[arg(long)]
    t1: Option<f64>,
    #[arg(long, default_value_t = -30.0)]
    x0: f64,
    #[arg(long, default_value_t = 30.0)]
    x1: f64,
    #[arg(long)]
    nt: Option<usize>,
    #[arg(long, default_value_t = 201)]
    nx: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where the diagnostics go when the table is CSV.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct ShockArgs {
    #[arg(long, default_value = "burgers")]
    flux: String,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = -20.0)]
    x0: f64,
    #[arg(long, default_value_t = 20.0)]
    x1: f64,
    #[arg(long, default_value_t = 401)]
    nx: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Serialize)]
struct SelfcheckArgs {
    /// Restrict to these check numbers.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn manifest_for<T: Serialize>(name: &str, args: &T) -> RunManifest {
    RunManifest::new(name, serde_json::to_value(args).expect("arguments serialize"))
}

fn dispatch(command: &Command, manifest: &mut RunManifest) -> CliResult<Outcome> {
    match command {
        Command::Eval(a) => {
            let w = SpaceTime {
                t0: a.t0,
                t1: a.t1,
                x0: a.x0,
                x1: a.x1,
                nt: a.nt,
                nx: a.nx,
            };
            commands::eval(&a.measure, w, a.format, a.out.as_deref(), manifest)
        }
        Command::Ancient(a) => commands::ancient(
            &a.measure,
            &a.speeds,
            &a.ladder,
            a.window_exponent,
            a.out.as_deref(),
            manifest,
        ),
        Command::Pde(a) => {
            let req = PdeRequest {
                flux: &a.flux,
                u0: &a.u0,
                duration: a.duration,
                x0: a.x0,
                x1: a.x1,
                nx: a.nx,
                outputs: &a.times,
                states: a.alpha.zip(a.beta),
            };
            commands::pde(&req, a.format, a.out.as_deref(), a.trace.as_deref(), manifest)
        }
        Command::Merger(a) => {
            let grid = match (a.t0, a.t1, a.nt) {
                (Some(t0), Some(t1), Some(nt)) => Some(SpaceTime {
                    t0,
                    t1,
                    x0: a.x0,
                    x1: a.x1,
                    nt,
                    nx: a.nx,
                }),
                _ => None,
            };
            let req = MergerRequest {
                schedule: a.schedule.as_deref(),
                k: a.k,
                deltas: &a.delta,
                merge_window: a.merge_window,
                repair_window: a.repair_window,
                merge_tol: a.merge_tol,
                repair_tol: a.repair_tol,
                grid,
            };
            commands::merger(&req, a.format, a.out.as_deref(), a.report.as_deref(), manifest)
        }
        Command::Shock(a) => commands::shock(
            &a.flux,
            a.alpha,
            a.beta,
            a.x0,
            a.x1,
            a.nx,
            a.format,
            a.out.as_deref(),
            manifest,
        ),
        Command::Selfcheck(a) => commands::selfcheck(&a.only, a.out.as_deref(), manifest),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_VAR} must be a positive integer, got '{raw}'"))?;
    if n == 0 {
        return Err(format!("{THREADS_VAR} must be a positive integer, got '{raw}'"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let mut manifest = match &cli.command {
        Command::Eval(a) => manifest_for("eval", a),
        Command::Ancient(a) => manifest_for("ancient", a),
        Command::Pde(a) => manifest_for("pde", a),
        Command::Merger(a) => manifest_for("merger", a),
        Command::Shock(a) => manifest_for("shock", a),
        Command::Selfcheck(a) => manifest_for("selfcheck", a),
    };
    match dispatch(&cli.command, &mut manifest) {
        Ok(Outcome { pass: true }) => ExitCode::SUCCESS,
        Ok(Outcome { pass: false }) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!(
                "manifest: {}",
                serde_json::to_string(&manifest).expect("manifests serialize")
            );
            ExitCode::from(2)
        }
    }
}
