use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use shockscope::ancient::{ancient_report, AncientReport, Window};
use shockscope::conservation::{rankine_hugoniot, shock_profile, Flux};
use shockscope::criteria::{self, CriterionReport};
use shockscope::entire::linspace;
use shockscope::merger::{merger_diag, repair_diag, Diagnostic, MergerSchedule, MergerSolution};
use shockscope::solver::{extract_shift, run_scl, Grid, ShiftTrace, SolverConfig};
use shockscope::{EntireSolution, Measure};

use crate::manifest::RunManifest;
use crate::output::{csv, emit, json};

#[derive(Debug)]
pub enum CliError {
    Core(shockscope::Error),
    Io(PathBuf, io::Error),
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Input(s) => f.write_str(s),
        }
    }
}

impl From<shockscope::Error> for CliError {
    fn from(e: shockscope::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Whether every check a command ran came out inside tolerance.
pub struct Outcome {
    pub pass: bool,
}

fn read_text(arg: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| CliError::Io(PathBuf::from(arg), e))
}

pub fn load_measure(arg: &str) -> CliResult<Measure> {
    let text = read_text(arg)?;
    Measure::from_json(&text).map_err(|e| CliError::Input(format!("measure {arg}: {e}")))
}

pub fn load_flux(arg: &str) -> CliResult<Flux> {
    if arg == "burgers" {
        return Ok(Flux::Burgers);
    }
    let text = read_text(arg)?;
    Flux::from_json(&text).map_err(|e| CliError::Input(format!("flux {arg}: {e}")))
}

pub fn load_schedule(arg: Option<&str>) -> CliResult<MergerSchedule> {
    match arg {
        None => Ok(MergerSchedule::desk()),
        Some(a) => {
            let text = read_text(a)?;
            MergerSchedule::from_json(&text).map_err(|e| CliError::Input(format!("schedule {a}: {e}")))
        }
    }
}

fn write(path: Option<&Path>, text: &str) -> CliResult<()> {
    emit(path, text).map_err(|e| CliError::Io(path.map(Path::to_path_buf).unwrap_or_else(|| "<stdout>".into()), e))
}

fn record(manifest: &mut RunManifest, path: Option<&Path>) {
    manifest.outputs.push(match path {
        Some(p) => p.display().to_string(),
        None => "<stdout>".to_string(),
    });
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpaceTime {
    pub t0: f64,
    pub t1: f64,
    pub x0: f64,
    pub x1: f64,
    pub nt: usize,
    pub nx: usize,
}

fn space_time<F>(w: &SpaceTime, f: F) -> CliResult<Vec<[f64; 3]>>
where
    F: Fn(f64, f64) -> CliResult<f64> + Sync,
{
    let ts = linspace(w.t0, w.t1, w.nt)?;
    let xs = linspace(w.x0, w.x1, w.nx)?;
    let rows: CliResult<Vec<Vec<[f64; 3]>>> = ts
        .par_iter()
        .map(|&t| {
            xs.iter()
                .map(|&x| {
                    let u = f(t, x)?;
                    if !u.is_finite() {
                        return Err(CliError::Core(shockscope::Error::NonFinite { time: t, x }));
                    }
                    Ok([t, x, u])
                })
                .collect()
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

#[derive(Serialize)]
struct RowsReport<'a, R: Serialize> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    body: R,
}

fn emit_grid(
    manifest: &mut RunManifest,
    rows: &[[f64; 3]],
    header: [&str; 3],
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    record(manifest, out);
    let text = match format {
        Format::Csv => csv(header, rows),
        Format::Json => json(&RowsReport {
            manifest,
            body: json!({ "columns": header, "rows": rows }),
        }),
    };
    write(out, &text)
}

pub fn eval(measure_arg: &str, w: SpaceTime, format: Format, out: Option<&Path>, manifest: &mut RunManifest) -> CliResult<Outcome> {
    let measure = load_measure(measure_arg)?;
    let sol = EntireSolution::new(&measure)?;
    let rows = space_time(&w, |t, x| Ok(sol.eval_u(t, x)))?;
    emit_grid(manifest, &rows, ["t", "x", "u"], format, out)?;
    Ok(Outcome { pass: true })
}

pub fn ancient(
    measure_arg: &str,
    speeds: &[f64],
    ladder: &[f64],
    exponent: f64,
    out: Option<&Path>,
    manifest: &mut RunManifest,
) -> CliResult<Outcome> {
    let measure = load_measure(measure_arg)?;
    let window = Window::new(exponent)?;
    let reports: Vec<AncientReport> = speeds
        .iter()
        .map(|&c| ancient_report(&measure, c, ladder, window))
        .collect::<Result<_, _>>()?;
    record(manifest, out);
    write(out, &json(&RowsReport { manifest, body: json!({ "reports": reports }) }))?;
    Ok(Outcome { pass: true })
}

/// Initial data: `const:V`, `step:L,R`, `tanh:K` for `-tanh(Kx)`,
/// `shock:A,B` for the travelling profile of the flux, or `file:PATH`
/// holding a JSON array of grid values.
pub fn initial_data(spec: &str, flux: &Flux, x0: f64, x1: f64, nx: usize) -> CliResult<Grid> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let nums = || -> CliResult<Vec<f64>> {
        rest.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Input(format!("u0 {spec}: {e}"))))
            .collect()
    };
    let want = |v: &[f64], n: usize| -> CliResult<()> {
        if v.len() != n {
            return Err(CliError::Input(format!("u0 {spec}: expected {n} numbers")));
        }
        Ok(())
    };
    let grid = match kind {
        "const" => {
            let v = nums()?;
            want(&v, 1)?;
            Grid::from_fn(x0, x1, nx, |_| v[0])?
        }
        "step" => {
            let v = nums()?;
            want(&v, 2)?;
            Grid::from_fn(x0, x1, nx, |x| {
                if x < 0.0 {
                    v[0]
                } else if x > 0.0 {
                    v[1]
                } else {
                    0.5 * (v[0] + v[1])
                }
            })?
        }
        "tanh" => {
            let v = nums()?;
            want(&v, 1)?;
            Grid::from_fn(x0, x1, nx, |x| -(v[0] * x).tanh())?
        }
        "shock" => {
            let v = nums()?;
            want(&v, 2)?;
            let p = shock_profile(flux, v[0], v[1])?;
            Grid::from_fn(x0, x1, nx, |x| p.eval(x))?
        }
        "file" => {
            let text = fs::read_to_string(rest).map_err(|e| CliError::Io(PathBuf::from(rest), e))?;
            let values: Vec<f64> = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("u0 {rest}: {e}")))?;
            if values.len() != nx {
                return Err(CliError::Input(format!("u0 {rest}: {} values for {nx} grid points", values.len())));
            }
            Grid::new(x0, x1, values, 0.0)?
        }
        _ => return Err(CliError::Input(format!("unknown u0 kind '{kind}'"))),
    };
    Ok(grid)
}

pub struct PdeRequest<'a> {
    pub flux: &'a str,
    pub u0: &'a str,
    pub duration: f64,
    pub x0: f64,
    pub x1: f64,
    pub nx: usize,
    pub outputs: &'a [f64],
    pub states: Option<(f64, f64)>,
}

pub fn pde(req: &PdeRequest<'_>, format: Format, out: Option<&Path>, trace_out: Option<&Path>, manifest: &mut RunManifest) -> CliResult<Outcome> {
    let flux = load_flux(req.flux)?;
    let u0 = initial_data(req.u0, &flux, req.x0, req.x1, req.nx)?;
    let snapshots = run_scl(&flux, &u0, req.duration, &SolverConfig::with_outputs(req.outputs))?;
    let mut rows = Vec::with_capacity((snapshots.len() + 1) * u0.n());
    for g in std::iter::once(&u0).chain(&snapshots) {
        rows.extend(g.values.iter().enumerate().map(|(i, &u)| [g.time, g.x(i), u]));
    }
    let trace: Option<ShiftTrace> = match req.states {
        Some((alpha, beta)) => Some(extract_shift(&snapshots, alpha, beta)?),
        None => None,
    };
    match format {
        Format::Csv => {
            emit_grid(manifest, &rows, ["t", "x", "u"], Format::Csv, out)?;
            if let Some(p) = trace_out {
                record(manifest, Some(p));
                write(Some(p), &json(&RowsReport { manifest, body: json!({ "shift_trace": trace }) }))?;
            }
        }
        Format::Json => {
            record(manifest, out);
            let body = json!({ "columns": ["t", "x", "u"], "rows": rows, "shift_trace": trace });
            write(out, &json(&RowsReport { manifest, body }))?;
        }
    }
    Ok(Outcome { pass: true })
}

pub struct MergerRequest<'a> {
    pub schedule: Option<&'a str>,
    pub k: usize,
    pub deltas: &'a [f64],
    pub merge_window: Option<f64>,
    pub repair_window: f64,
    pub merge_tol: f64,
    pub repair_tol: f64,
    pub grid: Option<SpaceTime>,
}

#[derive(Serialize)]
struct Checked {
    #[serde(flatten)]
    diagnostic: Diagnostic,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    tol: f64,
    pass: bool,
}

pub fn merger(req: &MergerRequest<'_>, format: Format, out: Option<&Path>, report: Option<&Path>, manifest: &mut RunManifest) -> CliResult<Outcome> {
    let schedule = load_schedule(req.schedule)?;
    let sol = MergerSolution::new(schedule.clone());
    let tk = schedule.time(req.k)?;
    let window = req.merge_window.unwrap_or(tk.min(100.0));
    let merge = merger_diag(&sol, req.k, window)?;
    let mut checks = vec![Checked {
        diagnostic: merge,
        delta: None,
        tol: req.merge_tol,
        pass: merge.sup_error <= req.merge_tol,
    }];
    for &delta in req.deltas {
        let d = repair_diag(&sol, req.k, delta, req.repair_window)?;
        checks.push(Checked {
            diagnostic: d,
            delta: Some(delta),
            tol: req.repair_tol,
            pass: d.sup_error <= req.repair_tol,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    let (merge_check, repair_checks) = checks.split_first().expect("merge check present");
    let diagnostics = json!({
        "schedule": schedule,
        "k": req.k,
        "merge": merge_check,
        "repair": repair_checks,
        "pass": pass,
    });
    let rows = match &req.grid {
        Some(w) => space_time(w, |t, x| Ok(sol.eval_u(t, x)?))?,
        None => Vec::new(),
    };
    match format {
        Format::Csv => {
            if req.grid.is_some() {
                emit_grid(manifest, &rows, ["t", "x", "u"], Format::Csv, out)?;
                if let Some(p) = report {
                    record(manifest, Some(p));
                    write(Some(p), &json(&RowsReport { manifest, body: json!({ "diagnostics": diagnostics }) }))?;
                }
            } else {
                let target = report.or(out);
                record(manifest, target);
                write(target, &json(&RowsReport { manifest, body: json!({ "diagnostics": diagnostics }) }))?;
            }
        }
        Format::Json => {
            record(manifest, out);
            let body = json!({ "columns": ["t", "x", "u"], "rows": rows, "diagnostics": diagnostics });
            write(out, &json(&RowsReport { manifest, body }))?;
        }
    }
    Ok(Outcome { pass })
}

#[allow(clippy::too_many_arguments)]
pub fn shock(
    flux_arg: &str,
    alpha: f64,
    beta: f64,
    x0: f64,
    x1: f64,
    nx: usize,
    format: Format,
    out: Option<&Path>,
    manifest: &mut RunManifest,
) -> CliResult<Outcome> {
    let flux = load_flux(flux_arg)?;
    let profile = shock_profile(&flux, alpha, beta)?;
    let (c, d) = rankine_hugoniot(&flux, alpha, beta)?;
    let xs = linspace(x0, x1, nx)?;
    let rows: Vec<[f64; 2]> = xs.iter().map(|&y| [y, profile.eval(y)]).collect();
    record(manifest, out);
    let text = match format {
        Format::Csv => csv(["y", "u"], &rows),
        Format::Json => json(&RowsReport {
            manifest,
            body: json!({ "speed": c, "d": d, "columns": ["y", "u"], "rows": rows }),
        }),
    };
    write(out, &text)?;
    Ok(Outcome { pass: true })
}

pub fn selfcheck(only: &[u8], out: Option<&Path>, manifest: &mut RunManifest) -> CliResult<Outcome> {
    manifest.seed = Some(criteria::SEED);
    let ids: Vec<u8> = if only.is_empty() { (1..=criteria::COUNT).collect() } else { only.to_vec() };
    let mut reports: Vec<CriterionReport> = Vec::with_capacity(ids.len());
    for id in ids {
        let r = criteria::run(id)?;
        eprintln!("{}", r.line());
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.pass);
    let passed = reports.iter().filter(|r| r.pass).count();
    eprintln!("selfcheck: {passed}/{} pass", reports.len());
    if out.is_some() {
        record(manifest, out);
        let stable: Vec<_> = reports
            .iter()
            .map(|r| json!({ "id": r.id, "title": r.title, "pass": r.pass, "detail": r.detail }))
            .collect();
        write(out, &json(&RowsReport { manifest, body: json!({ "criteria": stable, "pass": pass }) }))?;
    }
    Ok(Outcome { pass })
}
