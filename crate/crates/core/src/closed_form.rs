//! Explicit reference solutions.

use crate::error::{Error, Result};
use crate::special::{dawson, log_erfc_diff, LogReal};

const LN_HALF_SQRT_PI: f64 = -0.120_782_237_635_245_2;

/// `ln |sinh(x/2)|`.
fn ln_abs_sinh_half(x: f64) -> f64 {
    let a = 0.5 * x.abs();
    if a < 1.0 {
        a.sinh().ln()
    } else {
        a + (-(-2.0 * a).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

/// `ln ∫_{-1}^{1} e^{-zx/2 + z²t/4} dz` for `t ≠ 0`.
pub fn log_lebesgue_potential(t: f64, x: f64) -> Result<f64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "closed form needs finite t != 0, got {t}"
        )));
    }
    if t < 0.0 {
        let a = 0.5 * (-t).sqrt();
        let c = -x / t;
        let diff = log_erfc_diff(a * (c - 1.0), a * (c + 1.0));
        Ok(-x * x / (4.0 * t) - a.ln() + LN_HALF_SQRT_PI + diff.log_abs())
    } else {
        let a = 0.5 * t.sqrt();
        let c = x / t;
        let f = |w: f64| LogReal::from_f64(dawson(w)) * LogReal::exp(w * w);
        let sum = f(a * (1.0 - c)) + f(a * (1.0 + c));
        Ok(-x * x / (4.0 * t) - a.ln() + sum.log_abs())
    }
}

/// `u` for the Lebesgue measure on `[-1, 1]`.
pub fn closed_lebesgue_u(t: f64, x: f64) -> Result<f64> {
    let log_u = log_lebesgue_potential(t, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let tail = x.signum() * (0.25 * t + ln_abs_sinh_half(x) - log_u).exp();
    Ok(x / t - 4.0 / t * tail)
}

/// `u` for the Lebesgue measure on `[-1, 1]` plus a unit atom at 0.
pub fn closed_lebesgue_atom0_u(t: f64, x: f64) -> Result<f64> {
    let log_u = log_lebesgue_potential(t, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let log_one_plus = if log_u > 0.0 {
        log_u + (-log_u).exp().ln_1p()
    } else {
        log_u.exp().ln_1p()
    };
    let frac = 1.0 / (1.0 + (-log_u).exp());
    let tail = x.signum() * (0.25 * t + ln_abs_sinh_half(x) - log_one_plus).exp();
    Ok(x / t * frac - 4.0 / t * tail)
}

/// `Ψ_γ(x) = -2 sinh x / (γ + cosh x)`.
pub fn psi_gamma(gamma: f64, x: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    let e = (-x.abs()).exp();
    let e2 = e * e;
    Ok(-2.0 * x.signum() * (1.0 - e2) / (2.0 * gamma * e + 1.0 + e2))
}
