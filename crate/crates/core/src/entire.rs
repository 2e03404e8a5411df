//! Entire solutions `u = -2 ∂ₓU/U` with `U(t,x) = ∫ e^{-zx/2 + z²t/4} dμ(z)`.

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::special::{log_heat_kernel, LogReal};
use crate::tilt::{tilt, Exponent, Quadrature, Tilted};

/// A Burgers solution represented by a normalized measure.
#[derive(Clone, Debug)]
pub struct EntireSolution {
    measure: Measure,
    quad: Quadrature,
}

impl EntireSolution {
    /// Normalizes `measure` and uses the default 64-point rule.
    pub fn new(measure: &Measure) -> Result<Self> {
        Ok(EntireSolution {
            measure: measure.normalize()?,
            quad: Quadrature::standard().clone(),
        })
    }

    pub fn with_quadrature(measure: &Measure, order: usize, tol: f64) -> Result<Self> {
        Ok(EntireSolution {
            measure: measure.normalize()?,
            quad: Quadrature::new(order, tol)?,
        })
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    fn tilted(&self, t: f64, x: f64) -> Tilted {
        tilt(&self.measure, Exponent::burgers(t, x), &self.quad)
    }

    #[allow(non_snake_case)]
    pub fn eval_U(&self, t: f64, x: f64) -> LogReal {
        self.tilted(t, x).mass()
    }

    pub fn eval_u(&self, t: f64, x: f64) -> f64 {
        let (alpha, beta) = self.measure.support();
        self.tilted(t, x).mean().clamp(alpha, beta)
    }

    /// `∂ₓu = -½ Var(z)` under the tilted measure.
    pub fn eval_dx_u(&self, t: f64, x: f64) -> f64 {
        -0.5 * self.tilted(t, x).variance()
    }

    /// `(u, ∂ₓu)` from one quadrature pass.
    pub fn eval_u_and_dx(&self, t: f64, x: f64) -> (f64, f64) {
        let tilted = self.tilted(t, x);
        let (alpha, beta) = self.measure.support();
        (tilted.mean().clamp(alpha, beta), -0.5 * tilted.variance())
    }

    /// Heat-equation residual of the Appell transform
    /// `V(s,y) = K(s,y) U(-1/s, -y/s)` at the image `(s,y) = (-1/t, x/t)`.
    pub fn appell_check(&self, t: f64, x: f64, h: f64) -> Result<f64> {
        if !(t < 0.0) {
            return Err(Error::Precondition(format!("Appell check needs t < 0, got {t}")));
        }
        if !(h > 0.0) {
            return Err(Error::InvalidParameter(format!("stencil width must be positive, got {h}")));
        }
        let s = -1.0 / t;
        let y = x / t;
        if s - h <= 0.0 {
            return Err(Error::InvalidParameter(format!("stencil width {h} reaches s <= 0")));
        }
        let v = |s: f64, y: f64| (log_heat_kernel(s, y) + self.eval_U(-1.0 / s, -y / s).log_abs()).exp();
        let c = v(s, y);
        let ds = (v(s + h, y) - v(s - h, y)) / (2.0 * h);
        let dyy = (v(s, y + h) - 2.0 * c + v(s, y - h)) / (h * h);
        Ok((ds - dyy).abs())
    }

    /// Rows `(t, x, u)` over a rectangular grid, `t` outermost.
    pub fn grid(&self, t_range: (f64, f64), x_range: (f64, f64), nt: usize, nx: usize) -> Result<Vec<(f64, f64, f64)>> {
        let ts = linspace(t_range.0, t_range.1, nt)?;
        let xs = linspace(x_range.0, x_range.1, nx)?;
        let mut rows = Vec::with_capacity(nt * nx);
        for &t in &ts {
            for &x in &xs {
                let u = self.eval_u(t, x);
                if !u.is_finite() {
                    return Err(Error::NonFinite { time: t, x });
                }
                rows.push((t, x, u));
            }
        }
        Ok(rows)
    }
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("bad grid [{a}, {b}] with {n} points")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
        .collect())
}

/// `-2 ∂ₓU / U`.
#[allow(non_snake_case)]
pub fn cole_hopf(U: f64, dxU: f64) -> Result<f64> {
    if !(U > 0.0) {
        return Err(Error::InvalidParameter(format!("Cole-Hopf needs U > 0, got {U}")));
    }
    Ok(-2.0 * dxU / U)
}

/// `∫ K(t, x - z) dμ(z)` for `t > 0`.
pub fn poisson_eval(measure: &Measure, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let exp = Exponent {
        a2: -1.0 / (4.0 * t),
        a1: x / (2.0 * t),
        a0: log_heat_kernel(t, x),
    };
    Ok(tilt(measure, exp, Quadrature::standard()).mass().to_f64())
}
