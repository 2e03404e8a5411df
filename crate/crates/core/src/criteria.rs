//! Reproducible numerical checks of the main quantitative claims, each
//! reduced to a pass/fail verdict with the measured numbers attached.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ancient::{atom_probe, s_eps, symmetric_shock};
use crate::closed_form::{closed_lebesgue_u, psi_gamma};
use crate::conservation::{rankine_hugoniot, shock_profile, Flux};
use crate::entire::{linspace, EntireSolution};
use crate::error::{Error, Result};
use crate::measure::{Atom, Measure, Piece};
use crate::merger::{
    check_long_bounds, check_short_bounds, inter_asymptotic, merger_diag, repair_diag, vm_eval,
    MergerSchedule, MergerSolution,
};
use crate::solver::{
    aux_v, check_oleinik, extract_shift, run_advect_diffuse, run_scl, shock_error, Grid, SolverConfig,
};

/// Round-off allowance on the comparison and contraction checks.
pub const ROUND_OFF: f64 = 1e-12;

/// Seed shared by every randomized check.
pub const SEED: u64 = 20_240_601;

/// Number of checks.
pub const COUNT: u8 = 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    /// `PASS  7  title: detail`.
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {}: {} [{:.1}s]",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "two-shock closed form",
        2 => "Lebesgue closed form",
        3 => "ancient frame limits",
        4 => "shock with shift",
        5 => "atom detection",
        6 => "logarithmic shift",
        7 => "monotone convergence",
        8 => "shift speed",
        9 => "Oleinik bound",
        10 => "linear estimates",
        11 => "merger at tau_3",
        12 => "repair along steady shocks",
        13 => "V_m bound suites",
        14 => "property suites",
        _ => "unknown",
    }
}

/// Runs one check; module errors become failures carrying the message.
pub fn run(id: u8) -> Result<CriterionReport> {
    let check: fn() -> Result<(bool, String)> = match id {
        1 => c01_two_shock,
        2 => c02_lebesgue,
        3 => c03_frame_limits,
        4 => c04_shock_shift,
        5 => c05_atom,
        6 => c06_log_shift,
        7 => c07_monotone,
        8 => c08_shift_speed,
        9 => c09_oleinik,
        10 => c10_linear,
        11 => c11_merger,
        12 => c12_repair,
        13 => c13_bounds,
        14 => c14_properties,
        _ => {
            return Err(Error::OutOfRange {
                index: id as usize,
                max: COUNT as usize,
            })
        }
    };
    let start = Instant::now();
    let (pass, detail) = match check() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Ok(CriterionReport {
        id,
        title: title(id).to_string(),
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    (1..=COUNT).map(|id| run(id).expect("ids are in range")).collect()
}

fn sup_over<F: FnMut(f64) -> Result<f64>>(xs: &[f64], mut f: F) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in xs {
        let e = f(x)?;
        if !e.is_finite() {
            return Err(Error::NonFinite { time: f64::NAN, x });
        }
        worst = worst.max(e);
    }
    Ok(worst)
}

fn lebesgue() -> Measure {
    Measure::lebesgue(-1.0, 1.0).expect("unit interval is valid")
}

fn c01_two_shock() -> Result<(bool, String)> {
    let m = Measure::new(
        vec![
            Atom { z: -2.0, w: 0.25 },
            Atom { z: 0.0, w: 0.5 },
            Atom { z: 2.0, w: 0.25 },
        ],
        vec![],
    )?;
    let sol = EntireSolution::new(&m)?;
    let xs = linspace(-30.0, 30.0, 101)?;
    let mut worst: f64 = 0.0;
    for t in linspace(-25.0, 5.0, 101)? {
        let e = sup_over(&xs, |x| {
            Ok((sol.eval_u(t, x) - psi_gamma((-t).exp(), x)?).abs())
        })?;
        worst = worst.max(e);
    }
    Ok((worst <= 1e-10, format!("max error {worst:.3e} (tol 1e-10)")))
}

fn c02_lebesgue() -> Result<(bool, String)> {
    let sol = EntireSolution::new(&lebesgue())?;
    let xs = linspace(-10.0, 10.0, 41)?;
    let mut worst: f64 = 0.0;
    for t in [-9.0, -1.0, 1.0, 9.0] {
        worst = worst.max(sup_over(&xs, |x| Ok((sol.eval_u(t, x) - closed_lebesgue_u(t, x)?).abs()))?);
    }
    Ok((worst <= 1e-8, format!("max error {worst:.3e} (tol 1e-8)")))
}

fn c03_frame_limits() -> Result<(bool, String)> {
    let sol = EntireSolution::new(&lebesgue())?;
    let t = -1e4;
    let xs = linspace(-10.0, 10.0, 201)?;
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for c in [0.0f64, 0.5, -0.5, 2.0, -2.0] {
        let expected = if c.abs() <= 1.0 { c } else { c.signum() };
        let e = sup_over(&xs, |x| Ok((sol.eval_u(t, x + c * t) - expected).abs()))?;
        parts.push(format!("c={c}: {e:.2e}"));
        worst = worst.max(e);
    }
    Ok((worst <= 0.02, format!("{} (tol 0.02)", parts.join(", "))))
}

fn c04_shock_shift() -> Result<(bool, String)> {
    let m = Measure::new(vec![], vec![Piece::uniform(-2.0, -1.0, 1.0), Piece::uniform(1.0, 2.0, 1.0)])?;
    let t = -1e4;
    let s = s_eps(&m, 0.1, t)?;
    let s_half = s_eps(&m, 0.05, t)?;
    let sol = EntireSolution::new(&m)?;
    let xs = linspace(-5.0, 5.0, 201)?;
    let err = sup_over(&xs, |x| Ok((sol.eval_u(t, x) - symmetric_shock(1.0, x - s)).abs()))?;
    let gap = (s - s_half).abs();
    Ok((
        err <= 0.05 && gap <= 0.02,
        format!("profile error {err:.3e} (tol 0.05), |s_0.1 - s_0.05| {gap:.3e} (tol 0.02)"),
    ))
}

fn c05_atom() -> Result<(bool, String)> {
    let t = -1e6;
    let with_atom = EntireSolution::new(&lebesgue().plus(&Measure::dirac(0.0))?)?;
    let a = atom_probe(&with_atom, t, 1.0)?.abs();
    let plain = EntireSolution::new(&lebesgue())?;
    let b = sup_over(&[0.5, 1.0, 2.0], |x| Ok((atom_probe(&plain, t, x)? + x).abs()))?;
    Ok((
        a <= 1e-2 && b <= 2e-2,
        format!("with atom {a:.3e} (tol 1e-2), without {b:.3e} (tol 2e-2)"),
    ))
}

/// Zero of a decreasing function by bisection.
fn zero_crossing<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(Error::NoCrossing { level: 0.0, time: f64::NAN });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn c06_log_shift() -> Result<(bool, String)> {
    let sol = EntireSolution::new(&lebesgue().plus(&Measure::dirac(1.0))?)?;
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for t in [50.0f64, 100.0, 200.0] {
        let xbar = zero_crossing(|x| sol.eval_u(t, x), -100.0, 100.0)?;
        let e = (xbar - (1.0 + 0.5 * t).ln()).abs();
        parts.push(format!("t={t}: {e:.3e}"));
        worst = worst.max(e);
    }
    Ok((worst <= 0.1, format!("{} (tol 0.1)", parts.join(", "))))
}

fn c07_monotone() -> Result<(bool, String)> {
    let flux = Flux::Burgers;
    let u0 = Grid::from_fn(-50.0, 50.0, 2001, |x| -(2.0 * x).tanh())?;
    let out = run_scl(&flux, &u0, 400.0, &SolverConfig::with_outputs(&[4.0, 40.0]))?;
    let profile = shock_profile(&flux, -1.0, 1.0)?;
    let (c, d) = rankine_hugoniot(&flux, -1.0, 1.0)?;
    let err: Vec<f64> = out.iter().map(|g| shock_error(g, &profile, 0.0)).collect();
    let v: Vec<f64> = out.iter().map(|g| aux_v(g, &flux, c, d).sup_norm()).collect();
    let decreasing = err[2] < err[1];
    let small = err[2] <= 0.1;
    let v_ok = v[2] < 0.5 * v[0];
    Ok((
        decreasing && small && v_ok,
        format!(
            "err(40) {:.6e}, err(400) {:.6e} [decrease {}, <= 0.1 {}], sup|v| at 4 {:.3e}, at 400 {:.3e} [halved {}]",
            err[1], err[2], decreasing, small, v[0], v[2], v_ok
        ),
    ))
}

fn c08_shift_speed() -> Result<(bool, String)> {
    let u0 = Grid::from_fn(-210.0, 210.0, 4201, |x| {
        if x < 0.0 {
            1.0
        } else if x > 0.0 {
            0.0
        } else {
            0.5
        }
    })?;
    let out = run_scl(&Flux::Burgers, &u0, 200.0, &SolverConfig::default())?;
    let trace = extract_shift(&out, 0.0, 1.0)?;
    let last = trace.samples.last().ok_or(Error::NoCrossing { level: 0.5, time: 200.0 })?;
    let ratio = last.s / last.t;
    Ok((
        (0.48..=0.52).contains(&ratio),
        format!("s(200)/200 = {ratio:.6} (range [0.48, 0.52])"),
    ))
}

/// Piecewise-linear data through random values in `[-1, 1]` at the
/// integers of `[-5, 5]`, constant outside.
fn random_profile(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let knots: Vec<f64> = (0..11).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    move |x: f64| {
        let s = (x + 5.0).clamp(0.0, 10.0);
        let i = (s.floor() as usize).min(9);
        let frac = s - i as f64;
        knots[i] + frac * (knots[i + 1] - knots[i])
    }
}

fn c09_oleinik() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..5 {
        let u0 = Grid::from_fn(-80.0, 80.0, 3201, random_profile(&mut rng))?;
        let out = run_scl(&Flux::Burgers, &u0, 20.0, &SolverConfig::with_outputs(&[1.0, 5.0]))?;
        for g in &out {
            worst = worst.max(check_oleinik(g, 1.0)?);
        }
    }
    Ok((worst <= 1e-6, format!("max of u_x - 1/t: {worst:.3e} (tol 1e-6)")))
}

/// `-2 sinh x/(e^{-t} + cosh x)` written without overflow.
pub fn two_shock_background(t: f64, x: f64) -> f64 {
    psi_gamma((-t).exp(), x).expect("exp is positive")
}

fn c10_linear() -> Result<(bool, String)> {
    let w0 = Grid::from_fn(-80.0, 80.0, 1601, |x| (-(x + 5.0) * (x + 5.0)).exp())?;
    let times: Vec<f64> = (1..100).map(f64::from).collect();
    let out = run_advect_diffuse(
        &Flux::Burgers,
        |t, xs: &[f64]| xs.iter().map(|&x| two_shock_background(t, x)).collect(),
        &w0,
        100.0,
        &SolverConfig::with_outputs(&times),
    )?;
    let mass0 = w0.l1_norm();
    let mut prev = mass0;
    let mut worst_rise = f64::NEG_INFINITY;
    for g in &out {
        let m = g.l1_norm();
        worst_rise = worst_rise.max(m - prev);
        prev = m;
    }
    let scaled: Vec<f64> = out.iter().map(|g| g.time.sqrt() * g.sup_norm() / mass0).collect();
    let at_one = scaled[0];
    let sup = scaled.iter().copied().fold(0.0, f64::max);
    let l1_ok = worst_rise <= 1e-8;
    let decay_ok = sup <= 3.0 * at_one;
    Ok((
        l1_ok && decay_ok,
        format!(
            "largest L1 increase {worst_rise:.3e} (slack 1e-8), sup sqrt(t)|w|/|w0|_1 {sup:.4} vs 3x value at t=1 {:.4}",
            3.0 * at_one
        ),
    ))
}

fn c11_merger() -> Result<(bool, String)> {
    let sol = MergerSolution::new(MergerSchedule::desk());
    let d = merger_diag(&sol, 3, 100.0)?;
    Ok((
        d.sup_error <= 0.05,
        format!("tau_3 = {}, sup error {:.4e} (tol 0.05)", d.time, d.sup_error),
    ))
}

fn c12_repair() -> Result<(bool, String)> {
    let sol = MergerSolution::new(MergerSchedule::desk());
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for delta in [0.5, 1.0, 1.5] {
        let d = repair_diag(&sol, 3, delta, 5.0)?;
        parts.push(format!("delta={delta}: {:.3e}", d.sup_error));
        worst = worst.max(d.sup_error);
    }
    Ok((worst <= 1e-3, format!("{} (tol 1e-3)", parts.join(", "))))
}

fn c13_bounds() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 13);
    let mut long_fail = 0;
    for _ in 0..100 {
        let m = 10f64.powf(rng.gen_range(-1.0..2.0));
        let t = 10f64.powf(rng.gen_range(-2.0..5.0));
        let x = rng.gen_range(-100.0..100.0);
        if !check_long_bounds(m, t, x)?.all() {
            long_fail += 1;
        }
    }
    let mut short_fail = 0;
    for _ in 0..100 {
        let m = 10f64.powf(rng.gen_range(0.0..3.0));
        let t = rng.gen_range(0.0..1.0f64).max(1e-6) * m / 4.0;
        let reach = 0.5 * m - 2.0 * t;
        let x = rng.gen_range(-1.0..=1.0) * reach;
        if !check_short_bounds(m, t, x)?.all() {
            short_fail += 1;
        }
    }
    let mut worst: f64 = 0.0;
    for m in [1e4, 1e6] {
        for delta in [0.5, 1.0, 1.5] {
            let v = vm_eval(m, m / delta, 0.0)?;
            let lead = inter_asymptotic(m, delta, 0.0)?;
            worst = worst.max((v.ratio(lead) - 1.0).abs() * m);
        }
    }
    Ok((
        long_fail == 0 && short_fail == 0 && worst <= 100.0,
        format!(
            "long failures {long_fail}/100, short failures {short_fail}/100, max m*deviation {worst:.3} (tol 100)"
        ),
    ))
}

fn random_measure(rng: &mut ChaCha8Rng) -> Result<Measure> {
    let atoms: Vec<Atom> = (0..rng.gen_range(0..=3))
        .map(|_| Atom {
            z: rng.gen_range(-3.0..3.0),
            w: rng.gen_range(0.1..1.0),
        })
        .collect();
    let mut pieces = Vec::new();
    if atoms.is_empty() || rng.gen_bool(0.5) {
        let a = rng.gen_range(-3.0..-1.5);
        pieces.push(Piece::uniform(a, a + rng.gen_range(0.1..1.4), rng.gen_range(0.1..2.0)));
        if rng.gen_bool(0.5) {
            let b = rng.gen_range(0.0..2.0);
            pieces.push(Piece::uniform(b, b + rng.gen_range(0.1..1.0), rng.gen_range(0.1..2.0)));
        }
    }
    Measure::new(atoms, pieces)
}

/// Returns the number of monotonicity violations over `samples` draws.
pub fn monotonicity_violations(samples: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    let mut done = 0;
    while done < samples {
        let sol = EntireSolution::new(&random_measure(&mut rng)?)?;
        for _ in 0..10 {
            let t = rng.gen_range(-50.0..50.0);
            let x = rng.gen_range(-50.0..50.0);
            let slope = sol.eval_dx_u(t, x);
            let step = sol.eval_u(t, x + 1e-3) - sol.eval_u(t, x);
            if !(slope <= 0.0 && step <= 1e-12) {
                bad += 1;
            }
            done += 1;
        }
    }
    Ok(bad)
}

/// Largest violations of `u ≤ v` and of `|u - v|_1` contraction over five
/// ordered pairs.
pub fn comparison_check(seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order_gap = f64::NEG_INFINITY;
    let mut contraction_gap = f64::NEG_INFINITY;
    for _ in 0..5 {
        let base = random_profile(&mut rng);
        let centre = rng.gen_range(-3.0..3.0);
        let height = rng.gen_range(0.1..0.8);
        let u0 = Grid::from_fn(-40.0, 40.0, 801, &base)?;
        let v0 = Grid::from_fn(-40.0, 40.0, 801, |x| {
            base(x) + height * (1.0 - ((x - centre) / 2.0).powi(2)).max(0.0)
        })?;
        let config = SolverConfig::with_outputs(&[1.0, 2.0]);
        let us = run_scl(&Flux::Burgers, &u0, 5.0, &config)?;
        let vs = run_scl(&Flux::Burgers, &v0, 5.0, &config)?;
        let initial = v0.minus(&u0)?.l1_norm();
        for (u, v) in us.iter().zip(&vs) {
            let diff = v.minus(u)?;
            let lowest = diff.values.iter().copied().fold(f64::INFINITY, f64::min);
            order_gap = order_gap.max(-lowest);
            contraction_gap = contraction_gap.max(diff.l1_norm() - initial);
        }
    }
    Ok((order_gap, contraction_gap))
}

/// Observed orders `log2(e(dx)/e(dx/2))` on the steady shock `-tanh(x/2)`.
pub fn refinement_orders() -> Result<Vec<f64>> {
    let flux = Flux::Burgers;
    let profile = shock_profile(&flux, -1.0, 1.0)?;
    let mut errors = Vec::new();
    for n in [201usize, 401, 801, 1601] {
        let u0 = Grid::from_fn(-40.0, 40.0, n, |x| -(0.5 * x).tanh())?;
        let out = run_scl(&flux, &u0, 20.0, &SolverConfig::default())?;
        errors.push(shock_error(&out[0], &profile, 0.0));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

fn c14_properties() -> Result<(bool, String)> {
    let mono = monotonicity_violations(1000, SEED ^ 14)?;
    let (order_gap, contraction_gap) = comparison_check(SEED ^ 141)?;
    let orders = refinement_orders()?;
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    let pass = mono == 0 && order_gap <= ROUND_OFF && contraction_gap <= ROUND_OFF && min_order >= 1.0;
    Ok((
        pass,
        format!(
            "monotonicity violations {mono}/1000, max (u - v) {order_gap:.3e}, L1 growth {contraction_gap:.3e}, orders {:?}",
            orders.iter().map(|o| (o * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        ),
    ))
}
