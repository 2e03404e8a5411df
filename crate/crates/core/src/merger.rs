//! Superpositions of heat solutions whose Cole-Hopf transforms merge two
//! viscous shocks at a sparse sequence of times, then relax through the
//! family of smaller steady shocks.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::closed_form::psi_gamma;
use crate::entire::linspace;
use crate::error::{Error, Result};
use crate::special::{log_erfc, log_erfc_diff, log_erfc_diff_scaled, log_sum, LogReal};

/// Points in every diagnostic sweep.
pub const DIAG_POINTS: usize = 201;

/// Slack on log-domain bound comparisons.
const LOG_SLACK: f64 = 1e-12;

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

fn check_m(m: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("m must be positive, got {m}")));
    }
    Ok(())
}

/// `cosh(m)/2 · erfc((m + x)/(2√t))`.
fn vm_hat(m: f64, t: f64, x: f64) -> LogReal {
    let c = (m + x) / (2.0 * t.sqrt());
    if c < 0.0 {
        return LogReal::exp(ln_cosh(m) - LN_2) * log_erfc(c);
    }
    let erfcx = crate::special::erfcx(c);
    let l = m - (m + x) * (m + x) / (4.0 * t) + (-2.0 * m).exp().ln_1p() - 2.0 * LN_2 + erfcx.ln();
    LogReal::exp(l)
}

/// `e^{t+x}/4 · (erfc(a) - erfc(b))` with `a = (2t - m + x)/(2√t)` and
/// `b = (2t + m + x)/(2√t)`.
fn vm_wing(m: f64, t: f64, x: f64) -> LogReal {
    let s = 2.0 * t.sqrt();
    let a = (2.0 * t - m + x) / s;
    let b = (2.0 * t + m + x) / s;
    if a >= 0.0 {
        let l = m - (m - x) * (m - x) / (4.0 * t) - 2.0 * LN_2 + log_erfc_diff_scaled(a, b);
        LogReal::exp(l)
    } else {
        LogReal::exp(t + x - 2.0 * LN_2) * log_erfc_diff(a, b)
    }
}

fn check_vm_args(m: f64, t: f64) -> Result<()> {
    check_m(m)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be non-negative, got {t}")));
    }
    Ok(())
}

/// Heat evolution of `cosh(min(|x|, m))`.
pub fn vm_eval(m: f64, t: f64, x: f64) -> Result<LogReal> {
    check_vm_args(m, t)?;
    if t == 0.0 {
        return Ok(LogReal::exp(ln_cosh(x.abs().min(m))));
    }
    Ok(log_sum(&[
        vm_hat(m, t, x),
        vm_hat(m, t, -x),
        vm_wing(m, t, x),
        vm_wing(m, t, -x),
    ]))
}

/// `∂_x V_m(t, x)`.
pub fn vm_dx_eval(m: f64, t: f64, x: f64) -> Result<LogReal> {
    check_vm_args(m, t)?;
    if t == 0.0 {
        return Ok(if x.abs() < m {
            LogReal::from_f64(x.sinh())
        } else {
            LogReal::ZERO
        });
    }
    Ok(vm_wing(m, t, x) - vm_wing(m, t, -x))
}

/// Outcome of a pointwise bound check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub dx_ok: bool,
}

impl BoundCheck {
    pub fn all(&self) -> bool {
        self.lower_ok && self.upper_ok && self.dx_ok
    }
}

/// `cosh(m)(1 - m/√(πt)) ≤ V_m ≤ cosh(m)` and
/// `|∂_x V_m| ≤ m cosh(m)/(√(4π) t)`.
pub fn check_long_bounds(m: f64, t: f64, x: f64) -> Result<BoundCheck> {
    check_m(m)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let v = vm_eval(m, t, x)?.log_abs();
    let dv = vm_dx_eval(m, t, x)?;
    let lc = ln_cosh(m);
    let factor = 1.0 - m / (PI * t).sqrt();
    let lower_ok = factor <= 0.0 || lc + factor.ln() <= v + LOG_SLACK;
    let upper_ok = v <= lc + LOG_SLACK;
    let dx_bound = m.ln() + lc - ((4.0 * PI).sqrt() * t).ln();
    let dx_ok = dv.is_zero() || dv.log_abs() <= dx_bound + LOG_SLACK;
    Ok(BoundCheck {
        lower_ok,
        upper_ok,
        dx_ok,
    })
}

/// `e^t cosh(x) - V_m` and `e^t sinh(x) - ∂_x V_m`, from the part of the
/// data beyond `|y| = m`.
fn short_tail(m: f64, t: f64, x: f64) -> (LogReal, LogReal) {
    let s = 2.0 * t.sqrt();
    let q = |l: f64, arg: f64| LogReal::exp(l - 2.0 * LN_2) * log_erfc(arg);
    let plus = q(t + x, (m - x - 2.0 * t) / s) + q(t + x, (m + x + 2.0 * t) / s);
    let minus = q(t - x, (m - x + 2.0 * t) / s) + q(t - x, (m + x - 2.0 * t) / s);
    let flat = LogReal::exp(ln_cosh(m) - LN_2) * (log_erfc((m - x) / s) + log_erfc((m + x) / s));
    (log_sum(&[plus, minus, -flat]), plus - minus)
}

/// `e^t cosh(x)(1 - e^{-m²/(16t)}) ≤ V_m ≤ e^t cosh(x)` and
/// `|∂_x V_m - e^t sinh(x)| ≤ e^{-m²/(16t)} e^t cosh(x)`, valid for
/// `|x| + 2t ≤ m/2`.
pub fn check_short_bounds(m: f64, t: f64, x: f64) -> Result<BoundCheck> {
    check_m(m)?;
    if !(t > 0.0 && x.abs() + 2.0 * t <= 0.5 * m) {
        return Err(Error::Precondition(format!(
            "short-time bounds need t > 0 and |x| + 2t <= m/2, got m={m}, t={t}, x={x}"
        )));
    }
    let (gap, dgap) = short_tail(m, t, x);
    let scale = t + ln_cosh(x);
    let eps_log = -m * m / (16.0 * t);
    let upper_ok = gap.sign() >= 0 || gap.log_abs() <= scale + LOG_SLACK.ln();
    let lower_ok = gap.sign() <= 0 || gap.log_abs() <= scale + eps_log + LOG_SLACK;
    let dx_ok = dgap.is_zero() || dgap.log_abs() <= scale + eps_log + LOG_SLACK;
    Ok(BoundCheck {
        lower_ok,
        upper_ok,
        dx_ok,
    })
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 2), got {delta}")));
    }
    Ok(())
}

/// Leading behaviour of `V_m(m/δ, x)` as `m → ∞`:
/// `(πmδ)^{-1/2} · 2/(2-δ) · e^{m(1-δ/4)} cosh(δx/2)`.
pub fn inter_asymptotic(m: f64, delta: f64, x: f64) -> Result<LogReal> {
    check_m(m)?;
    check_delta(delta)?;
    let l = -0.5 * (PI * m * delta).ln() + (2.0 / (2.0 - delta)).ln() + m * (1.0 - 0.25 * delta)
        + ln_cosh(0.5 * delta * x);
    Ok(LogReal::exp(l))
}

/// Times `t_1 < … < t_J` with `t_{j+1} ≥ N² t_j²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub struct MergerSchedule {
    n: u32,
    times: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    #[serde(rename = "N")]
    n: u32,
    times: Vec<f64>,
}

impl TryFrom<ScheduleRepr> for MergerSchedule {
    type Error = Error;
    fn try_from(r: ScheduleRepr) -> Result<Self> {
        MergerSchedule::new(r.n, r.times)
    }
}

impl From<MergerSchedule> for ScheduleRepr {
    fn from(s: MergerSchedule) -> Self {
        ScheduleRepr {
            n: s.n,
            times: s.times,
        }
    }
}

impl MergerSchedule {
    pub fn new(n: u32, times: Vec<f64>) -> Result<Self> {
        if n < 10 {
            return Err(Error::InvalidParameter(format!("N must be at least 10, got {n}")));
        }
        if times.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a schedule needs at least 2 times, got {}",
                times.len()
            )));
        }
        if !(times[0] >= 1.0 && times[0].is_finite()) {
            return Err(Error::InvalidParameter(format!("t_1 must be at least 1, got {}", times[0])));
        }
        let nn = f64::from(n);
        for (j, w) in times.windows(2).enumerate() {
            if !(w[1].is_finite() && w[1] >= nn * nn * w[0] * w[0]) {
                return Err(Error::InvalidParameter(format!(
                    "t_{} = {} is below N² t_{}² = {}",
                    j + 2,
                    w[1],
                    j + 1,
                    nn * nn * w[0] * w[0]
                )));
            }
        }
        Ok(MergerSchedule { n, times })
    }

    /// `N = 10`, `t = (1, 200, 10⁹)`.
    pub fn desk() -> Self {
        MergerSchedule {
            n: 10,
            times: vec![1.0, 200.0, 1e9],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schedules always serialize")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `t_k` with `k` counted from 1.
    pub fn time(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.times.len() {
            return Err(Error::OutOfRange {
                index: k,
                max: self.times.len(),
            });
        }
        Ok(self.times[k - 1])
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k < 2 || k > self.times.len() {
            return Err(Error::OutOfRange {
                index: k,
                max: self.times.len(),
            });
        }
        Ok(())
    }

    /// `τ_k = t_k + (N - 1) t_{k-1}`.
    pub fn merge_time(&self, k: usize) -> Result<f64> {
        self.check_k(k)?;
        Ok(self.times[k - 1] + f64::from(self.n - 1) * self.times[k - 2])
    }

    /// `N t_k / δ`.
    pub fn repair_time(&self, k: usize, delta: f64) -> Result<f64> {
        self.check_k(k)?;
        check_delta(delta)?;
        Ok(f64::from(self.n) * self.times[k - 1] / delta)
    }
}

/// `U = 1 + Σ_j e^{-t_j} V_{N t_j}` and its Burgers transform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergerSolution {
    schedule: MergerSchedule,
}

impl MergerSolution {
    pub fn new(schedule: MergerSchedule) -> Self {
        MergerSolution { schedule }
    }

    pub fn schedule(&self) -> &MergerSchedule {
        &self.schedule
    }

    /// `(U, ∂_x U)` using the first `terms` schedule entries.
    pub fn potential_truncated(&self, terms: usize, t: f64, x: f64) -> Result<(LogReal, LogReal)> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t must be non-negative, got {t}")));
        }
        let n = f64::from(self.schedule.n);
        let mut values = vec![LogReal::ONE];
        let mut slopes = Vec::new();
        for &tj in self.schedule.times.iter().take(terms) {
            let weight = LogReal::exp(-tj);
            values.push(weight * vm_eval(n * tj, t, x)?);
            slopes.push(weight * vm_dx_eval(n * tj, t, x)?);
        }
        Ok((log_sum(&values), log_sum(&slopes)))
    }

    #[allow(non_snake_case)]
    pub fn eval_U(&self, t: f64, x: f64) -> Result<(LogReal, LogReal)> {
        self.potential_truncated(self.schedule.len(), t, x)
    }

    pub fn eval_u(&self, t: f64, x: f64) -> Result<f64> {
        let (u, du) = self.eval_U(t, x)?;
        Ok((-2.0 * du.ratio(u)).clamp(-2.0, 2.0))
    }

    /// `(t, x, u)` rows with `t` outermost.
    pub fn grid(&self, t_range: (f64, f64), x_range: (f64, f64), nt: usize, nx: usize) -> Result<Vec<(f64, f64, f64)>> {
        let ts = linspace(t_range.0, t_range.1, nt)?;
        let xs = linspace(x_range.0, x_range.1, nx)?;
        let mut rows = Vec::with_capacity(nt * nx);
        for &t in &ts {
            for &x in &xs {
                rows.push((t, x, self.eval_u(t, x)?));
            }
        }
        Ok(rows)
    }
}

pub fn merger_u(sol: &MergerSolution, t: f64, x: f64) -> Result<f64> {
    sol.eval_u(t, x)
}

/// Time probed and largest deviation found on the sampled window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub time: f64,
    pub window: f64,
    pub sup_error: f64,
}

fn sweep<F: Fn(f64) -> f64>(sol: &MergerSolution, time: f64, window: f64, target: F) -> Result<Diagnostic> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::InvalidParameter(format!("window must be positive, got {window}")));
    }
    let mut sup: f64 = 0.0;
    for x in linspace(-window, window, DIAG_POINTS)? {
        sup = sup.max((sol.eval_u(time, x)? - target(x)).abs());
    }
    Ok(Diagnostic {
        time,
        window,
        sup_error: sup,
    })
}

/// `sup |u(τ_k, x) + 2 sinh x/(1 + cosh x)|` over `|x| ≤ window`.
pub fn merger_diag(sol: &MergerSolution, k: usize, window: f64) -> Result<Diagnostic> {
    let tau = sol.schedule.merge_time(k)?;
    sweep(sol, tau, window, |x| psi_gamma(1.0, x).expect("gamma is positive"))
}

/// `sup |u(N t_k/δ, x) + δ tanh(δx/2)|` over `|x| ≤ window`.
pub fn repair_diag(sol: &MergerSolution, k: usize, delta: f64, window: f64) -> Result<Diagnostic> {
    let tau = sol.schedule.repair_time(k, delta)?;
    sweep(sol, tau, window, |x| -delta * (0.5 * delta * x).tanh())
}
