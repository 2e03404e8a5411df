use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use shockscope::closed_form::closed_lebesgue_u;

const FIG1: &str = r#"{"atoms":[{"z":-2,"w":0.25},{"z":0,"w":0.5},{"z":2,"w":0.25}]}"#;
const LEBESGUE: &str = r#"{"pieces":[{"a":-1,"b":1,"coeffs":[1]}]}"#;

fn shockscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shockscope"))
        .args(args)
        .env("SHOCKSCOPE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn rows(csv: &[u8], header: &str) -> Vec<Vec<f64>> {
    let text = std::str::from_utf8(csv).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn eval_reproduces_three_atom_closed_form() {
    let out = shockscope(&["eval", "--measure", FIG1]);
    assert!(out.status.success());
    let table = rows(&out.stdout, "t,x,u");
    assert_eq!(table.len(), 101 * 101);
    let (t_lo, t_hi) = (table[0][0], table[table.len() - 1][0]);
    assert_eq!((t_lo, t_hi), (-25.0, 5.0));
    for r in &table {
        let (t, x) = (r[0], r[1]);
        let exact = -2.0 * x.sinh() / ((-t).exp() + x.cosh());
        assert!((r[2] - exact).abs() <= 1e-10, "t={t} x={x}: {} vs {exact}", r[2]);
    }
}

#[test]
fn single_atom_gives_constant_grid() {
    let out = shockscope(&["eval", "--measure", r#"{"atoms":[{"z":0.7,"w":3}]}"#, "--nt", "11", "--nx", "21"]);
    assert!(out.status.success());
    let table = rows(&out.stdout, "t,x,u");
    assert_eq!(table.len(), 231);
    assert!(table.iter().all(|r| r[2] == 0.7));
}

#[test]
fn lebesgue_grid_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let measure = dir.path().join("lebesgue.json");
    std::fs::write(&measure, LEBESGUE).unwrap();
    let args = ["--t0", "-9", "--t1", "9", "--nt", "4", "--x0", "-10", "--x1", "10", "--nx", "41"];
    let mut full = vec!["eval", "--measure", measure.to_str().unwrap()];
    full.extend(args);
    let out = shockscope(&full);
    assert!(out.status.success());
    for r in rows(&out.stdout, "t,x,u") {
        let exact = closed_lebesgue_u(r[0], r[1]).unwrap();
        assert!((r[2] - exact).abs() <= 1e-8, "t={} x={}", r[0], r[1]);
    }
}

#[test]
fn ancient_limits_for_lebesgue() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("ancient.json");
    let out = shockscope(&[
        "ancient",
        "--measure",
        LEBESGUE,
        "--speeds",
        "0,0.5,2,-3",
        "--ladder=-1e2,-1e3,-1e4",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = read_json(&report);
    assert_eq!(doc["manifest"]["command"], "ancient");
    let limits: Vec<f64> = doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value_or_pair"][0].as_f64().unwrap())
        .collect();
    assert_eq!(limits, vec![0.0, 0.5, 1.0, -1.0]);
    for r in doc["reports"].as_array().unwrap() {
        let errs: Vec<f64> = r["errors_by_t"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e["sup_err"].as_f64().unwrap())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }
}

#[test]
fn pde_with_constant_data_stays_flat() {
    let out = shockscope(&["pde", "--u0", "const:0.3", "--T", "2", "--x0", "-5", "--x1", "5", "--nx", "101", "--times", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = rows(&out.stdout, "t,x,u");
    assert_eq!(table.len(), 3 * 101);
    assert!(table.iter().all(|r| (r[2] - 0.3).abs() <= 1e-15));
}

#[test]
fn pde_writes_shift_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let out = shockscope(&[
        "pde", "--u0", "tanh:2", "--T", "4", "--x0", "-20", "--x1", "20", "--nx", "401", "--times", "1,2,3",
        "--alpha", "-1", "--beta", "1", "--trace", trace.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = read_json(&trace);
    let samples = doc["shift_trace"]["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 4);
}

#[test]
fn merger_default_schedule_repairs() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("merger.json");
    let out = shockscope(&["merger", "--k", "3", "--delta", "1", "--report", report.to_str().unwrap()]);
    let doc = read_json(&report);
    let repair = &doc["diagnostics"]["repair"][0];
    assert_eq!(repair["delta"], 1.0);
    assert!(repair["sup_error"].as_f64().unwrap() <= 1e-3);
    let merge_ok = doc["diagnostics"]["merge"]["pass"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if merge_ok { 0 } else { 1 }));
}

#[test]
fn shock_profile_table() {
    let out = shockscope(&["shock", "--alpha", "-1", "--beta", "1", "--nx", "41", "--format", "json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["speed"], 0.0);
    let us: Vec<f64> = doc["rows"].as_array().unwrap().iter().map(|r| r[1].as_f64().unwrap()).collect();
    assert!(us.windows(2).all(|w| w[1] < w[0]));
    assert!((us[20]).abs() < 1e-12);
}

#[test]
fn selfcheck_single_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let out = shockscope(&["selfcheck", "--only", "1", "--out", summary.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS  1 "));
    let doc = read_json(&summary);
    assert_eq!(doc["pass"], true);
    assert!(doc["manifest"]["seed"].is_u64());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = shockscope(&["eval", "--measure", LEBESGUE, "--nt", "7", "--nx", "33", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
    let a = shockscope(&["pde", "--u0", "step:1,0", "--T", "3", "--nx", "201", "--x0", "-20", "--x1", "20"]);
    let b = shockscope(&["pde", "--u0", "step:1,0", "--T", "3", "--nx", "201", "--x0", "-20", "--x1", "20"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["eval", "--measure", FIG1, "--nt", "9", "--nx", "17"];
    let one = Command::new(env!("CARGO_BIN_EXE_shockscope"))
        .args(args)
        .env("SHOCKSCOPE_THREADS", "1")
        .output()
        .unwrap();
    let many = shockscope(&args);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn parse_errors_carry_position_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"atoms\": [\n  {\"z\": 1, \"w\": }]}").unwrap();
    let out = shockscope(&["eval", "--measure", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2 column 17"), "{err}");
    assert!(err.contains("manifest: {"), "{err}");
}

#[test]
fn bad_thread_setting_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_shockscope"))
        .args(["eval", "--measure", FIG1])
        .env("SHOCKSCOPE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
