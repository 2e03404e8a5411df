//! Convex fluxes, Rankine-Hugoniot data, viscous shock profiles and the
//! Oleinik constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

const CONVEXITY_SAMPLES: usize = 256;
const PROFILE_TAIL: f64 = 1e-14;
const PROFILE_SPAN: f64 = 200.0;

/// A polynomial flux, with Burgers `u²/2` as a named case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Flux {
    Burgers,
    Poly { coeffs: Vec<f64> },
}

impl Flux {
    pub fn poly(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "flux coefficients must be a non-empty list of finite numbers".into(),
            ));
        }
        Ok(Flux::Poly { coeffs })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let flux: Flux = serde_json::from_str(text).map_err(|e| {
            Error::Serialization(format!("{e} (line {}, column {})", e.line(), e.column()))
        })?;
        if let Flux::Poly { coeffs } = &flux {
            Flux::poly(coeffs.clone())?;
        }
        Ok(flux)
    }

    pub fn polynomial(&self) -> Polynomial {
        match self {
            Flux::Burgers => Polynomial::new(vec![0.0, 0.0, 0.5]),
            Flux::Poly { coeffs } => Polynomial::new(coeffs.clone()),
        }
    }

    pub fn f(&self, u: f64) -> f64 {
        match self {
            Flux::Burgers => 0.5 * u * u,
            Flux::Poly { .. } => self.polynomial().eval(u),
        }
    }

    pub fn df(&self, u: f64) -> f64 {
        match self {
            Flux::Burgers => u,
            Flux::Poly { .. } => self.polynomial().derivative().eval(u),
        }
    }

    pub fn d2f(&self, u: f64) -> f64 {
        match self {
            Flux::Burgers => 1.0,
            Flux::Poly { .. } => self.polynomial().derivative().derivative().eval(u),
        }
    }

    /// `min f''` over `[lo, hi]`.
    pub fn convexity(&self, lo: f64, hi: f64) -> f64 {
        let p2 = self.polynomial().derivative().derivative();
        let p3 = p2.derivative();
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let n = CONVEXITY_SAMPLES;
        let pts: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let mut k = pts.iter().map(|&u| p2.eval(u)).fold(f64::INFINITY, f64::min);
        for w in pts.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let (fa, fb) = (p3.eval(a), p3.eval(b));
            if fa < 0.0 && fb > 0.0 {
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if p3.eval(m) < 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                k = k.min(p2.eval(0.5 * (a + b)));
            }
        }
        k
    }

    /// Errors when `f''` dips below zero on `[lo, hi]`.
    pub fn check_convex(&self, lo: f64, hi: f64) -> Result<f64> {
        let k = self.convexity(lo, hi);
        let scale = self.d2f(lo).abs().max(self.d2f(hi).abs()).max(1.0);
        if k < -1e-12 * scale {
            return Err(Error::NonConvexFlux {
                lo,
                hi,
                min_second_derivative: k,
            });
        }
        Ok(k.max(0.0))
    }

    /// Minimizer of `f` on `[lo, hi]`, the sonic state of a convex flux.
    pub fn sonic_point(&self, lo: f64, hi: f64) -> f64 {
        if self.df(lo) >= 0.0 {
            return lo;
        }
        if self.df(hi) <= 0.0 {
            return hi;
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.df(m) < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    /// `max |f'|` on `[lo, hi]` for a convex flux.
    pub fn max_speed(&self, lo: f64, hi: f64) -> f64 {
        self.df(lo).abs().max(self.df(hi).abs())
    }
}

/// `(c, d)` with `c = (f(β) - f(α))/(β - α)` and `d = f(β) - cβ`.
pub fn rankine_hugoniot(flux: &Flux, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if !(alpha < beta) {
        return Err(Error::InvalidParameter(format!(
            "shock states need alpha < beta, got ({alpha}, {beta})"
        )));
    }
    let (fa, fb) = (flux.f(alpha), flux.f(beta));
    let c = (fb - fa) / (beta - alpha);
    let d = fb - c * beta;
    let d_alt = fa - c * alpha;
    let scale = fa.abs().max(fb.abs()).max((c * alpha).abs()).max((c * beta).abs()).max(1.0);
    debug_assert!((d - d_alt).abs() <= 1e-12 * scale, "d = {d}, alternative {d_alt}");
    Ok((c, d))
}

/// Lax entropy condition `f'(β) > c > f'(α)`.
pub fn lax_holds(flux: &Flux, alpha: f64, beta: f64) -> Result<bool> {
    let (c, _) = rankine_hugoniot(flux, alpha, beta)?;
    Ok(flux.df(beta) > c && c > flux.df(alpha))
}

/// `1/(kt)` with `k = min f''` on `[α, β]`.
pub fn oleinik_rhs(flux: &Flux, alpha: f64, beta: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let k = flux.check_convex(alpha, beta)?;
    if !(k > 0.0) {
        return Err(Error::DegenerateConvexity(k));
    }
    Ok(1.0 / (k * t))
}

/// Decay of one side of the profile: `η' = G(η)` in the distance `s` from
/// the centre, with `η(0) = (β - α)/2`.
#[derive(Clone, Debug)]
struct Branch {
    s: Vec<f64>,
    eta: Vec<f64>,
    rhs: Polynomial,
    drhs: Polynomial,
}

impl Branch {
    fn integrate(rhs: Polynomial, eta0: f64, rate: f64) -> Branch {
        let drhs = rhs.derivative();
        let rate_max = (0..=64)
            .map(|i| drhs.eval(eta0 * i as f64 / 64.0).abs())
            .fold(rate, f64::max)
            .max(1e-12);
        let s_max = PROFILE_SPAN / rate.max(1e-2);
        let h_max = 0.05 / rate_max;
        let tail = PROFILE_TAIL.min(1e-3 * eta0);
        let mut s = vec![0.0];
        let mut eta = vec![eta0];
        let (mut x, mut y) = (0.0, eta0);
        let mut h = 0.01 / rate_max;
        let rtol = 1e-13;
        let atol = 1e-3 * tail;
        while y > tail && x < s_max {
            h = h.min(h_max).min(s_max - x);
            let (y_new, err) = dopri5_step(&rhs, y, h);
            let scale = atol + rtol * y.abs().max(y_new.abs());
            let ratio = err / scale;
            if ratio <= 1.0 {
                x += h;
                y = y_new;
                s.push(x);
                eta.push(y);
            }
            let factor = if ratio == 0.0 { 5.0 } else { 0.9 * ratio.powf(-0.2) };
            h *= factor.clamp(0.2, 5.0);
        }
        Branch { s, eta, rhs, drhs }
    }

    fn eval(&self, s: f64) -> f64 {
        let n = self.s.len();
        if s >= self.s[n - 1] {
            return 0.0;
        }
        let i = match self.s.binary_search_by(|v| v.total_cmp(&s)) {
            Ok(i) => return self.eta[i],
            Err(i) => i - 1,
        };
        let (s0, s1) = (self.s[i], self.s[i + 1]);
        let (p0, p1) = (self.eta[i], self.eta[i + 1]);
        let (m0, m1) = (self.rhs.eval(p0), self.rhs.eval(p1));
        let (a0, a1) = (self.drhs.eval(p0) * m0, self.drhs.eval(p1) * m1);
        let h = s1 - s0;
        let t = (s - s0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h3 = 0.5 * t3 - t4 + 0.5 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        h0 * p0 + h1 * h * m0 + h2 * h * h * a0 + h3 * h * h * a1 + h4 * h * m1 + h5 * p1
    }

    fn extent(&self) -> f64 {
        *self.s.last().unwrap()
    }
}

fn dopri5_step(f: &Polynomial, y: f64, h: f64) -> (f64, f64) {
    let k1 = f.eval(y);
    let k2 = f.eval(y + h * (k1 / 5.0));
    let k3 = f.eval(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    let k4 = f.eval(y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
    let k5 = f.eval(
        y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 + 64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4),
    );
    let k6 = f.eval(
        y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4
            - 5103.0 / 18656.0 * k5),
    );
    let y_new = y + h
        * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5
            + 11.0 / 84.0 * k6);
    let k7 = f.eval(y_new);
    let err = h
        * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 + 71.0 / 1920.0 * k4 - 17253.0 / 339200.0 * k5
            + 22.0 / 525.0 * k6
            - 1.0 / 40.0 * k7);
    (y_new, err.abs())
}

/// The decreasing travelling wave `φ` connecting `β` at `-∞` to `α` at `+∞`,
/// normalized by `φ(0) = (α + β)/2`.
#[derive(Clone, Debug)]
pub struct ShockProfile {
    alpha: f64,
    beta: f64,
    c: f64,
    d: f64,
    rhs: Polynomial,
    right: Branch,
    left: Branch,
}

pub fn shock_profile(flux: &Flux, alpha: f64, beta: f64) -> Result<ShockProfile> {
    let (c, d) = rankine_hugoniot(flux, alpha, beta)?;
    flux.check_convex(alpha, beta)?;
    let rhs = flux.polynomial().add_linear(-d, -c);
    let half = 0.5 * (beta - alpha);
    // η = φ - α on y > 0; ζ = β - φ on y < 0
    let right_rhs = rhs.recentred(alpha, 1.0).with_constant(0.0);
    let left_rhs = rhs.recentred(beta, -1.0).with_constant(0.0);
    let right_rate = -right_rhs.derivative().eval(0.0);
    let left_rate = -left_rhs.derivative().eval(0.0);
    let right = Branch::integrate(right_rhs, half, right_rate);
    let left = Branch::integrate(left_rhs, half, left_rate);
    Ok(ShockProfile {
        alpha,
        beta,
        c,
        d,
        rhs,
        right,
        left,
    })
}

impl ShockProfile {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn speed(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn eval(&self, y: f64) -> f64 {
        if y == 0.0 {
            0.5 * (self.alpha + self.beta)
        } else if y > 0.0 {
            self.alpha + self.right.eval(y)
        } else {
            self.beta - self.left.eval(-y)
        }
    }

    /// `φ - α` for `y >= 0` and `β - φ` for `y < 0`.
    pub fn deviation(&self, y: f64) -> f64 {
        if y >= 0.0 {
            self.right.eval(y)
        } else {
            self.left.eval(-y)
        }
    }

    /// `φ'(y) = f(φ) - cφ - d`.
    pub fn slope(&self, y: f64) -> f64 {
        self.rhs.eval(self.eval(y))
    }

    /// Tabulated range `(y_min, y_max)`; beyond it the profile is clamped.
    pub fn extent(&self) -> (f64, f64) {
        (-self.left.extent(), self.right.extent())
    }

    /// Tabulation nodes in increasing `y`.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self
            .left
            .s
            .iter()
            .zip(&self.left.eta)
            .skip(1)
            .rev()
            .map(|(&s, &z)| (-s, self.beta - z))
            .collect();
        out.push((0.0, 0.5 * (self.alpha + self.beta)));
        out.extend(
            self.right
                .s
                .iter()
                .zip(&self.right.eta)
                .skip(1)
                .map(|(&s, &e)| (s, self.alpha + e)),
        );
        out
    }
}

/// `c - δ tanh(δy/2)` with `δ = (β - α)/2`, the Burgers profile.
pub fn burgers_profile(alpha: f64, beta: f64, y: f64) -> f64 {
    let delta = 0.5 * (beta - alpha);
    0.5 * (alpha + beta) - delta * (0.5 * delta * y).tanh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rankine_hugoniot_examples() {
        assert_eq!(rankine_hugoniot(&Flux::Burgers, -2.0, 2.0).unwrap(), (0.0, 2.0));
        let (c, _) = rankine_hugoniot(&Flux::Burgers, -0.3, 1.1).unwrap();
        assert!((c - 0.4).abs() < 1e-15);
        let quartic = Flux::poly(vec![0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(rankine_hugoniot(&quartic, 0.0, 1.0).unwrap(), (1.0, 0.0));
        assert!(rankine_hugoniot(&Flux::Burgers, 1.0, 1.0).is_err());
    }

    #[test]
    fn oleinik_examples() {
        assert_eq!(oleinik_rhs(&Flux::Burgers, -2.0, 2.0, 2.0).unwrap(), 0.5);
        let quartic = Flux::poly(vec![0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((oleinik_rhs(&quartic, 1.0, 2.0, 1.0).unwrap() - 1.0 / 12.0).abs() < 1e-14);
        let mixed = Flux::poly(vec![0.0, 0.0, 0.5, 0.0, 1.0 / 12.0]).unwrap();
        assert!((oleinik_rhs(&mixed, 0.0, 1.0, 4.0).unwrap() - 0.25).abs() < 1e-14);
        assert!(matches!(
            oleinik_rhs(&quartic, 0.0, 1.0, 1.0),
            Err(Error::DegenerateConvexity(_))
        ));
    }

    #[test]
    fn convexity_finds_interior_minimum() {
        // f'' = 12u^2 - 12u + 4 has its minimum 1 at u = 1/2
        let f = Flux::poly(vec![0.0, 0.0, 2.0, -2.0, 1.0]).unwrap();
        assert!((f.convexity(0.0, 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonconvex_rejected() {
        let cubic = Flux::poly(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(shock_profile(&cubic, -1.0, 1.0).is_err());
    }

    #[test]
    fn burgers_profile_matches_tanh() {
        let p = shock_profile(&Flux::Burgers, -1.0, 2.0).unwrap();
        for i in 0..20 {
            let y = -9.5 + i as f64;
            assert!((p.eval(y) - burgers_profile(-1.0, 2.0, y)).abs() < 1e-8, "y={y}");
        }
        assert_eq!(p.eval(0.0), 0.5);
    }

    #[test]
    fn quartic_profile_residual() {
        let flux = Flux::poly(vec![0.0, -1.0, 0.0, 0.0, 1.0]).unwrap();
        let p = shock_profile(&flux, -1.0, 1.0).unwrap();
        let h = 1e-3;
        for i in 0..50 {
            let y = -4.0 + 0.16 * i as f64;
            let fd = (-p.eval(y + 2.0 * h) + 8.0 * p.eval(y + h) - 8.0 * p.eval(y - h) + p.eval(y - 2.0 * h))
                / (12.0 * h);
            assert!((fd - p.slope(y)).abs() <= 1e-9, "y={y}");
        }
    }

    #[test]
    fn flux_json() {
        let f = Flux::from_json(r#"{"kind":"poly","coeffs":[0,1,2]}"#).unwrap();
        assert_eq!(f, Flux::Poly { coeffs: vec![0.0, 1.0, 2.0] });
        assert_eq!(Flux::from_json(r#"{"kind":"burgers"}"#).unwrap(), Flux::Burgers);
        assert_eq!(serde_json::to_string(&Flux::Burgers).unwrap(), r#"{"kind":"burgers"}"#);
    }
}
