//! Overflow-safe special functions and signed log-magnitude arithmetic.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Magnitudes whose relative difference falls below this collapse to zero.
pub const CANCELLATION_EPS: f64 = 1e-15;

/// Crossover between the library erfc and its asymptotic expansion.
pub const ERFC_ASYMPTOTIC_CUTOFF: f64 = 25.0;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

/// A real number stored as a sign and the logarithm of its magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogReal {
    sign: i8,
    log_abs: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogReal = LogReal {
        sign: 1,
        log_abs: 0.0,
    };

    /// Builds a value from a sign and log-magnitude. A zero sign or a
    /// magnitude of `-inf` yields zero.
    pub fn from_parts(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogReal {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    /// `e^l`, always positive.
    pub fn exp(l: f64) -> Self {
        Self::from_parts(1, l)
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LogReal {
                sign: if v > 0.0 { 1 } else { -1 },
                log_abs: v.abs().ln(),
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn log_abs(self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.log_abs
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        LogReal {
            sign: self.sign.abs(),
            log_abs: self.log_abs,
        }
    }

    pub fn recip(self) -> Self {
        LogReal {
            sign: self.sign,
            log_abs: -self.log_abs,
        }
    }

    /// Ratio `self / other` as an ordinary float.
    pub fn ratio(self, other: LogReal) -> f64 {
        (self / other).to_f64()
    }

    /// Orders by signed value.
    pub fn cmp_value(self, other: LogReal) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.log_abs.total_cmp(&other.log_abs),
                _ => other.log_abs.total_cmp(&self.log_abs),
            },
            ord => ord,
        }
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal {
            sign: -self.sign,
            log_abs: self.log_abs,
        }
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 || rhs.sign == 0 {
            LogReal::ZERO
        } else {
            LogReal {
                sign: self.sign * rhs.sign,
                log_abs: self.log_abs + rhs.log_abs,
            }
        }
    }
}

impl Div for LogReal {
    type Output = LogReal;
    fn div(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 {
            return LogReal::ZERO;
        }
        if rhs.sign == 0 {
            return LogReal {
                sign: self.sign,
                log_abs: f64::INFINITY,
            };
        }
        LogReal {
            sign: self.sign * rhs.sign,
            log_abs: self.log_abs - rhs.log_abs,
        }
    }
}

impl Add for LogReal {
    type Output = LogReal;
    fn add(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_abs >= rhs.log_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let r = (small.log_abs - big.log_abs).exp();
        if big.sign == small.sign {
            LogReal {
                sign: big.sign,
                log_abs: big.log_abs + r.ln_1p(),
            }
        } else if 1.0 - r < CANCELLATION_EPS {
            LogReal::ZERO
        } else {
            LogReal {
                sign: big.sign,
                log_abs: big.log_abs + (-r).ln_1p(),
            }
        }
    }
}

impl Sub for LogReal {
    type Output = LogReal;
    fn sub(self, rhs: LogReal) -> LogReal {
        self + (-rhs)
    }
}

impl std::iter::Sum for LogReal {
    fn sum<I: Iterator<Item = LogReal>>(iter: I) -> LogReal {
        let terms: Vec<LogReal> = iter.collect();
        log_sum(&terms)
    }
}

/// Sums signed log-magnitudes after factoring out the largest one.
/// Terms are accumulated in descending magnitude so the result does not
/// depend on input order.
pub fn log_sum(terms: &[LogReal]) -> LogReal {
    let mut live: Vec<LogReal> = terms.iter().copied().filter(|t| t.sign != 0).collect();
    if live.is_empty() {
        return LogReal::ZERO;
    }
    live.sort_by(|a, b| b.log_abs.total_cmp(&a.log_abs).then(b.sign.cmp(&a.sign)));
    let top = live[0].log_abs;
    if top == f64::INFINITY {
        return live[0];
    }
    let mut acc = 0.0;
    let mut mag = 0.0;
    for t in &live {
        let v = (t.log_abs - top).exp();
        acc += f64::from(t.sign) * v;
        mag += v;
    }
    if acc.abs() <= CANCELLATION_EPS * mag {
        return LogReal::ZERO;
    }
    LogReal {
        sign: if acc > 0.0 { 1 } else { -1 },
        log_abs: top + acc.abs().ln(),
    }
}

/// `sum_n (-1)^n (2n-1)!! / (2x^2)^n`, truncated at the smallest term.
fn erfc_asymptotic_series(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..60 {
        let next = -term * (2 * n - 1) as f64 * inv;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x > ERFC_ASYMPTOTIC_CUTOFF {
        log_erfc(x).to_f64()
    } else {
        libm::erfc(x)
    }
}

/// `erfc(x)` as a log-magnitude; finite for arbitrarily large `x`.
pub fn log_erfc(x: f64) -> LogReal {
    if x.is_nan() {
        return LogReal::from_parts(1, f64::NAN);
    }
    if x > ERFC_ASYMPTOTIC_CUTOFF {
        let l = -x * x - x.ln() - LN_SQRT_PI + erfc_asymptotic_series(x).ln();
        LogReal::exp(l)
    } else {
        LogReal::from_f64(libm::erfc(x))
    }
}

/// `e^{x^2} erfc(x)` for `x >= 0`; negative arguments use reflection.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        let p = x * x;
        let e = x.mul_add(x, -p);
        return 2.0 * p.exp() * e.exp() - erfcx(-x);
    }
    if x < ERFC_ASYMPTOTIC_CUTOFF {
        let p = x * x;
        let e = x.mul_add(x, -p);
        libm::erfc(x) * p.exp() * e.exp()
    } else {
        erfc_asymptotic_series(x) / (x * SQRT_PI)
    }
}

fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20).expect("order 20 is valid"))
}

/// `erfc(a) - erfc(b)` for `a < b`, free of cancellation.
pub fn log_erfc_diff(a: f64, b: f64) -> LogReal {
    if !(a < b) {
        if a == b {
            return LogReal::ZERO;
        }
        return -log_erfc_diff(b, a);
    }
    if b <= 0.0 {
        return log_erfc_diff(-b, -a);
    }
    if a < 0.0 {
        return LogReal::from_f64(libm::erf(b) + libm::erf(-a));
    }
    LogReal::exp(-a * a + log_erfc_diff_scaled(a, b))
}

/// `ln(e^{a^2} (erfc(a) - erfc(b)))` for `0 <= a < b`.
pub fn log_erfc_diff_scaled(a: f64, b: f64) -> f64 {
    debug_assert!(0.0 <= a && a < b);
    let h = b - a;
    if h * (b + a) <= 1.0 {
        let integral = gl20().integrate(0.0, h, |s| (-(2.0 * a * s + s * s)).exp());
        (2.0 / SQRT_PI).ln() + integral.ln()
    } else {
        (erfcx(a) - (-(h * (b + a))).exp() * erfcx(b)).ln()
    }
}

/// `E(x) = ∫_0^x e^{-y^2} dy`.
pub fn err_e(x: f64) -> f64 {
    0.5 * SQRT_PI * libm::erf(x)
}

/// Dawson's integral `D(x) = e^{-x^2} ∫_0^x e^{y^2} dy`.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < 0.2 {
        dawson_taylor(ax)
    } else if ax > 100.0 {
        dawson_asymptotic(ax)
    } else {
        dawson_rybicki(ax)
    };
    v.copysign(x)
}

fn dawson_taylor(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..40 {
        term *= -2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn dawson_asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..30 {
        term *= (2 * n - 1) as f64 * inv;
        sum += term;
        if term < 1e-18 {
            break;
        }
    }
    sum / (2.0 * x)
}

// Rybicki's sampling formula with odd-offset nodes.
fn dawson_rybicki(x: f64) -> f64 {
    const H: f64 = 0.25;
    const REACH: f64 = 9.0;
    let n0 = 2 * ((0.5 * x / H).round() as i64);
    let xp = x - n0 as f64 * H;
    let mut sum = 0.0;
    let kmax = (REACH / (2.0 * H)).ceil() as i64 + 1;
    for k in (0..=kmax).rev() {
        let n = (2 * k + 1) as f64;
        let dp = xp - n * H;
        let dm = xp + n * H;
        sum += (-dp * dp).exp() / (n + n0 as f64) + (-dm * dm).exp() / (n0 as f64 - n);
    }
    sum / SQRT_PI
}

/// Heat kernel `K(t,x) = e^{-x^2/(4t)} / sqrt(4πt)`.
pub fn heat_kernel(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    Ok(log_heat_kernel(t, x).exp())
}

/// `ln K(t,x)` for `t > 0`.
pub fn log_heat_kernel(t: f64, x: f64) -> f64 {
    -x * x / (4.0 * t) - 0.5 * (4.0 * PI * t).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn logreal_roundtrip() {
        for v in [-3.5, -1e-300, 0.0, 2.0, 1e300] {
            assert!(close(LogReal::from_f64(v).to_f64(), v, 1e-13));
        }
    }

    #[test]
    fn log_sum_examples() {
        let s = log_sum(&[LogReal::from_f64(2.0), LogReal::from_f64(3.0)]);
        assert!(close(s.log_abs(), 5f64.ln(), 1e-15));

        let s = log_sum(&[LogReal::exp(1000.0), LogReal::exp(10.0)]);
        assert_eq!(s.log_abs(), 1000.0 + (-990f64).exp().ln_1p());

        let s = log_sum(&[LogReal::exp(5.0), -LogReal::exp(5.0)]);
        assert_eq!(s.sign(), 0);
    }

    #[test]
    fn near_cancellation_is_zero() {
        let a = LogReal::exp(3.0);
        assert!((a - a).is_zero());
        let b = LogReal::from_f64(1.0 + 1e-12);
        assert_eq!((b - LogReal::ONE).sign(), 1);
    }

    #[test]
    fn erfc_basic() {
        assert_eq!(erfc(0.0), 1.0);
        for z in [0.5, 1.0, 2.0, 5.0] {
            assert!(erfc(z) <= (-z * z).exp());
        }
    }

    #[test]
    fn erfc_branches_agree_on_overlap() {
        // beyond ~26.5 the library value is subnormal
        for i in 0..=26 {
            let x = 20.0 + 0.25 * i as f64;
            let direct = libm::erfc(x).ln();
            let asym = -x * x - x.ln() - LN_SQRT_PI + erfc_asymptotic_series(x).ln();
            assert!((direct - asym).abs() <= 1e-12 * direct.abs(), "x={x}");
        }
    }

    #[test]
    fn log_erfc_huge_argument() {
        let x = 1e5;
        let l = log_erfc(x).log_abs();
        // one extra term beyond the leading order
        let expected = -x * x - (x * SQRT_PI).ln() + (-1.0 / (2.0 * x * x)).ln_1p();
        assert!((l - expected).abs() <= 1e-12 * expected.abs());
    }

    #[test]
    fn erfc_diff_matches_direct() {
        let cases = [(0.1, 0.3), (-0.5, 0.7), (-2.0, -1.0), (1.0, 3.0), (4.0, 4.0001), (30.0, 31.0)];
        for (a, b) in cases {
            let got = log_erfc_diff(a, b);
            let direct = erfc(a) - erfc(b);
            if direct > 1e-250 {
                assert!(close(got.to_f64(), direct, 1e-9), "{a} {b}");
            } else {
                let via_logs = log_erfc(a) - log_erfc(b);
                assert!((got.log_abs() - via_logs.log_abs()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dawson_limits() {
        assert_eq!(dawson(0.0), 0.0);
        let x: f64 = 0.01;
        assert!((dawson(x) - (x - 2.0 * x.powi(3) / 3.0)).abs() <= 1e-9);
        // the two-term expansion is off by the next term 3/(8x^5) ≈ 1.2e-9 at x = 50
        let x: f64 = 50.0;
        let four_terms = 1.0 / (2.0 * x) + 1.0 / (4.0 * x.powi(3)) + 3.0 / (8.0 * x.powi(5)) + 15.0 / (16.0 * x.powi(7));
        assert!((dawson(x) - four_terms).abs() <= 1e-14);
        assert!((dawson(x) - (0.01 + 1.0 / (4.0 * x.powi(3)))).abs() <= 1e-9 + 3.0 / (8.0 * x.powi(5)));
        assert_eq!(dawson(-1.7), -dawson(1.7));
    }

    #[test]
    fn dawson_branch_continuity() {
        assert!((dawson_taylor(0.2) / dawson_rybicki(0.2) - 1.0).abs() < 1e-14);
        assert!((dawson_asymptotic(100.0) / dawson_rybicki(100.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn heat_kernel_values() {
        assert!(close(heat_kernel(0.25, 0.0).unwrap(), 1.0 / PI.sqrt(), 1e-15));
        assert!(close(
            heat_kernel(1.0, 2.0).unwrap(),
            (-1f64).exp() / (4.0 * PI).sqrt(),
            1e-15
        ));
        assert!(heat_kernel(0.0, 1.0).is_err());
    }
}
