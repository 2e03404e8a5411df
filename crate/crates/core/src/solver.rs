//! Explicit finite differences for `u_t + f(u)_x = u_xx` and the linear
//! equation `w_t + f'(u) w_x = w_xx`.

use serde::{Deserialize, Serialize};

use crate::conservation::{Flux, ShockProfile};
use crate::error::{Error, Result};

/// Values on a uniform grid at one time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub values: Vec<f64>,
    pub time: f64,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "a grid needs at least 3 points, got {}",
                values.len()
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidParameter(format!("bad grid interval [{x_min}, {x_max}]")));
        }
        let dx = (x_max - x_min) / (values.len() - 1) as f64;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                time,
                x: x_min + dx * i as f64,
            });
        }
        Ok(Grid {
            x_min,
            x_max,
            values,
            time,
        })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(x_min: f64, x_max: f64, n: usize, f: F) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("a grid needs at least 3 points, got {n}")));
        }
        let dx = (x_max - x_min) / (n - 1) as f64;
        let values = (0..n).map(|i| f(x_min + dx * i as f64)).collect();
        Grid::new(x_min, x_max, values, 0.0)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + self.dx() * i as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n()).map(|i| self.x_min + dx * i as f64).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Riemann sum `Σ|u_i| dx`.
    pub fn l1_norm(&self) -> f64 {
        self.dx() * self.values.iter().map(|v| v.abs()).sum::<f64>()
    }

    pub fn sum(&self) -> f64 {
        self.dx() * self.values.iter().sum::<f64>()
    }

    fn same_mesh(&self, other: &Grid) -> bool {
        self.n() == other.n() && self.x_min == other.x_min && self.x_max == other.x_max
    }

    pub fn minus(&self, other: &Grid) -> Result<Grid> {
        if !self.same_mesh(other) {
            return Err(Error::GridMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        Ok(Grid {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            ..self.clone()
        })
    }
}

/// Convective discretization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvectionScheme {
    /// Engquist-Osher flux everywhere.
    EngquistOsher,
    /// Centred differences while `max|f'| dx <= 2`, where they still give a
    /// monotone scheme; Engquist-Osher otherwise.
    Hybrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub cfl_safety: f64,
    pub scheme: ConvectionScheme,
    /// Snapshot times; the final time is always emitted.
    pub output_times: Vec<f64>,
    /// Fail when an edge slope reaches `boundary_tol` at a snapshot.
    pub boundary_monitor: bool,
    pub boundary_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cfl_safety: 0.4,
            scheme: ConvectionScheme::Hybrid,
            output_times: Vec::new(),
            boundary_monitor: true,
            boundary_tol: 1e-10,
        }
    }
}

impl SolverConfig {
    pub fn with_outputs(times: &[f64]) -> Self {
        SolverConfig {
            output_times: times.to_vec(),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            )));
        }
        Ok(())
    }

    fn schedule(&self, start: f64, end: f64) -> Vec<f64> {
        let mut times: Vec<f64> = self
            .output_times
            .iter()
            .copied()
            .filter(|&t| t >= start && t < end)
            .collect();
        times.push(end);
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }

    fn centred(&self, dx: f64, speed: f64) -> bool {
        self.scheme == ConvectionScheme::Hybrid && speed * dx <= 2.0
    }

    fn stable_dt(&self, dx: f64, speed: f64) -> f64 {
        let diffusive = 0.5 * dx * dx;
        let bound = if speed > 0.0 { diffusive.min(dx / speed) } else { diffusive };
        self.cfl_safety * bound
    }
}

fn check_boundary(grid: &Grid, config: &SolverConfig) -> Result<()> {
    if !config.boundary_monitor {
        return Ok(());
    }
    let n = grid.n();
    let dx = grid.dx();
    let left = (grid.values[1] - grid.values[0]).abs() / dx;
    let right = (grid.values[n - 1] - grid.values[n - 2]).abs() / dx;
    let slope = left.max(right);
    if slope >= config.boundary_tol {
        return Err(Error::BoundaryContamination {
            time: grid.time,
            slope,
        });
    }
    Ok(())
}

fn check_finite(grid: &Grid) -> Result<()> {
    match grid.values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite {
            time: grid.time,
            x: grid.x(i),
        }),
        None => Ok(()),
    }
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Integrates `u_t + f(u)_x = u_xx` from `u0` over a time span `duration`.
///
/// Diffusion uses the three-point Laplacian and the end values stay pinned
/// to those of `u0`.
pub fn run_scl(flux: &Flux, u0: &Grid, duration: f64, config: &SolverConfig) -> Result<Vec<Grid>> {
    config.validate()?;
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidParameter(format!("duration must be positive, got {duration}")));
    }
    check_finite(u0)?;
    let n = u0.n();
    let dx = u0.dx();
    let (lo, hi) = min_max(&u0.values);
    flux.check_convex(lo, hi)?;
    let f = flux.polynomial();
    let df = f.derivative();
    let sonic = flux.sonic_point(lo, hi);
    let f_sonic = f.eval(sonic);
    let eo = |ul: f64, ur: f64| f.eval(ul.max(sonic)) + f.eval(ur.min(sonic)) - f_sonic;

    let start = u0.time;
    let end = start + duration;
    let mut u = u0.values.clone();
    let mut next = u.clone();
    let mut fluxes = vec![0.0; n - 1];
    let mut t = start;
    let mut snapshots = Vec::new();
    for target in config.schedule(start, end) {
        while t < target {
            let (ulo, uhi) = min_max(&u);
            let speed = df.eval(ulo).abs().max(df.eval(uhi).abs());
            let bound = config.stable_dt(dx, speed);
            let remaining = target - t;
            let dt = if remaining <= bound * (1.0 + 1e-12) { remaining } else { bound };
            if dt > bound * (1.0 + 1e-9) {
                return Err(Error::CflViolation { dt, bound });
            }
            if config.centred(dx, speed) {
                for i in 0..n - 1 {
                    fluxes[i] = 0.5 * (f.eval(u[i]) + f.eval(u[i + 1]));
                }
            } else {
                for i in 0..n - 1 {
                    fluxes[i] = eo(u[i], u[i + 1]);
                }
            }
            let mu = dt / (dx * dx);
            let nu = dt / dx;
            next[0] = u[0];
            next[n - 1] = u[n - 1];
            for i in 1..n - 1 {
                next[i] = u[i] - nu * (fluxes[i] - fluxes[i - 1]) + mu * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
            }
            std::mem::swap(&mut u, &mut next);
            t = if dt == remaining { target } else { t + dt };
        }
        let snap = Grid {
            values: u.clone(),
            time: target,
            ..u0.clone()
        };
        check_finite(&snap)?;
        let (slo, shi) = min_max(&snap.values);
        let slack = 1e-10;
        if slo < lo - slack || shi > hi + slack {
            let value = if slo < lo - slack { slo } else { shi };
            return Err(Error::MaximumPrinciple {
                time: target,
                value,
                lo,
                hi,
            });
        }
        check_boundary(&snap, config)?;
        snapshots.push(snap);
    }
    Ok(snapshots)
}

/// Integrates `w_t + f'(u) w_x = w_xx` with `u` supplied per step by
/// `background(t, xs)`; convection follows the configured scheme, upwinded
/// on the sign of `f'(u)` when not centred.
pub fn run_advect_diffuse<P>(
    flux: &Flux,
    background: P,
    w0: &Grid,
    duration: f64,
    config: &SolverConfig,
) -> Result<Vec<Grid>>
where
    P: Fn(f64, &[f64]) -> Vec<f64>,
{
    config.validate()?;
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidParameter(format!("duration must be positive, got {duration}")));
    }
    check_finite(w0)?;
    let n = w0.n();
    let dx = w0.dx();
    let xs = w0.xs();
    let df = flux.polynomial().derivative();
    let start = w0.time;
    let end = start + duration;
    let mut w = w0.values.clone();
    let mut next = w.clone();
    let mut speeds = vec![0.0; n];
    let mut t = start;
    let mut snapshots = Vec::new();
    for target in config.schedule(start, end) {
        while t < target {
            let u = background(t, &xs);
            if u.len() != n {
                return Err(Error::GridMismatch {
                    expected: n,
                    got: u.len(),
                });
            }
            let mut speed: f64 = 0.0;
            for (a, &ui) in speeds.iter_mut().zip(&u) {
                *a = df.eval(ui);
                speed = speed.max(a.abs());
            }
            let bound = config.stable_dt(dx, speed);
            let remaining = target - t;
            let dt = if remaining <= bound * (1.0 + 1e-12) { remaining } else { bound };
            let mu = dt / (dx * dx);
            let nu = dt / dx;
            let centred = config.centred(dx, speed);
            next[0] = w[0];
            next[n - 1] = w[n - 1];
            for i in 1..n - 1 {
                let a = speeds[i];
                let adv = if centred {
                    0.5 * a * (w[i + 1] - w[i - 1])
                } else if a > 0.0 {
                    a * (w[i] - w[i - 1])
                } else {
                    a * (w[i + 1] - w[i])
                };
                next[i] = w[i] - nu * adv + mu * (w[i + 1] - 2.0 * w[i] + w[i - 1]);
            }
            std::mem::swap(&mut w, &mut next);
            t = if dt == remaining { target } else { t + dt };
        }
        let snap = Grid {
            values: w.clone(),
            time: target,
            ..w0.clone()
        };
        check_finite(&snap)?;
        check_boundary(&snap, config)?;
        snapshots.push(snap);
    }
    Ok(snapshots)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftPoint {
    pub t: f64,
    pub s: f64,
}

/// Positions where each snapshot crosses the level `(α + β)/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftTrace {
    pub level: f64,
    pub samples: Vec<ShiftPoint>,
}

fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    m
}

/// Locates the unique level crossing of one snapshot by monotone cubic
/// interpolation.
pub fn crossing(grid: &Grid, level: f64) -> Result<f64> {
    let v = &grid.values;
    let above: Vec<bool> = v.iter().map(|&u| u > level).collect();
    let changes: Vec<usize> = (0..v.len() - 1).filter(|&i| above[i] != above[i + 1]).collect();
    let i = match changes.as_slice() {
        [] => {
            return Err(Error::NoCrossing {
                level,
                time: grid.time,
            })
        }
        [i] => *i,
        many => {
            return Err(Error::NonMonotoneCrossing {
                time: grid.time,
                crossings: many.len(),
            })
        }
    };
    if v[i] <= v[i + 1] {
        return Err(Error::NonMonotoneCrossing {
            time: grid.time,
            crossings: 1,
        });
    }
    let lo = i.saturating_sub(2);
    let hi = (i + 3).min(v.len() - 1);
    let xs: Vec<f64> = (lo..=hi).map(|j| grid.x(j)).collect();
    let ys = &v[lo..=hi];
    let m = pchip_slopes(&xs, ys);
    let k = i - lo;
    let (x0, x1) = (xs[k], xs[k + 1]);
    let (y0, y1) = (ys[k], ys[k + 1]);
    let h = x1 - x0;
    let (m0, m1) = (m[k], m[k + 1]);
    let p = |x: f64| {
        let t = (x - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * h * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * h * m1
    };
    let (mut a, mut b) = (x0, x1);
    while b - a > 1e-12 * h {
        let mid = 0.5 * (a + b);
        if p(mid) > level {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

pub fn extract_shift(snapshots: &[Grid], alpha: f64, beta: f64) -> Result<ShiftTrace> {
    let level = 0.5 * (alpha + beta);
    let samples = snapshots
        .iter()
        .map(|g| {
            Ok(ShiftPoint {
                t: g.time,
                s: crossing(g, level)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShiftTrace { level, samples })
}

/// `max_i (u_{i+1} - u_i)/dx - 1/(kt)`.
pub fn check_oleinik(snapshot: &Grid, k: f64) -> Result<f64> {
    if !(snapshot.time > 0.0) {
        return Err(Error::NonPositiveTime(snapshot.time));
    }
    if !(k > 0.0) {
        return Err(Error::DegenerateConvexity(k));
    }
    let dx = snapshot.dx();
    let max_slope = snapshot
        .values
        .windows(2)
        .map(|w| (w[1] - w[0]) / dx)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(max_slope - 1.0 / (k * snapshot.time))
}

/// `v = u_x - f(u) + cu + d` with centred differences.
pub fn aux_v(snapshot: &Grid, flux: &Flux, c: f64, d: f64) -> Grid {
    let n = snapshot.n();
    let dx = snapshot.dx();
    let u = &snapshot.values;
    let f = flux.polynomial();
    let values = (0..n)
        .map(|i| {
            let ux = if i == 0 {
                (u[1] - u[0]) / dx
            } else if i == n - 1 {
                (u[n - 1] - u[n - 2]) / dx
            } else {
                (u[i + 1] - u[i - 1]) / (2.0 * dx)
            };
            ux - f.eval(u[i]) + c * u[i] + d
        })
        .collect();
    Grid {
        values,
        ..snapshot.clone()
    }
}

/// `max_i |u_i - φ(x_i - s)|`.
pub fn shock_error(snapshot: &Grid, profile: &ShockProfile, s: f64) -> f64 {
    let dx = snapshot.dx();
    snapshot
        .values
        .iter()
        .enumerate()
        .map(|(i, &u)| (u - profile.eval(snapshot.x_min + dx * i as f64 - s)).abs())
        .fold(0.0, f64::max)
}
