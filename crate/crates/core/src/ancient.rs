//! Behaviour of entire solutions as `t → -∞` along Galilean frames.

use serde::{Deserialize, Serialize};

use crate::entire::{linspace, EntireSolution};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::tilt::{tilt, Exponent, Quadrature};

/// Absolute tolerance on `a + b` for the symmetric-gap case.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative band inside which both classifications are reported.
pub const NEAR_DEGENERATE_REL: f64 = 1e-6;
pub const FIXED_POINT_TOL: f64 = 1e-10;
pub const FIXED_POINT_MAX_ITER: usize = 10_000;
/// Discrepancy between `s_ε` and `s_{ε/2}` above which a warning is raised.
pub const SHIFT_CONSISTENCY_TOL: f64 = 1e-3;
const FRAME_SAMPLES: usize = 101;

/// Limit of `u(t, x + ct)` as `t → -∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrameLimit {
    /// `c` lies in the support and the limit is `c` itself.
    InSupport { c: f64 },
    Constant { value: f64 },
    /// A standing shock `c + φ_{b,-b}(x - s(t))` in the moving frame.
    ShockWithShift { b: f64, c: f64 },
}

impl FrameLimit {
    pub fn kind(&self) -> &'static str {
        match self {
            FrameLimit::InSupport { .. } => "InSupport",
            FrameLimit::Constant { .. } => "Constant",
            FrameLimit::ShockWithShift { .. } => "ShockWithShift",
        }
    }

    pub fn value_or_pair(&self) -> Vec<f64> {
        match *self {
            FrameLimit::InSupport { c } => vec![c],
            FrameLimit::Constant { value } => vec![value],
            FrameLimit::ShockWithShift { b, .. } => vec![b, -b],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameClassification {
    pub limit: FrameLimit,
    /// The competing classification when `|a + b|` is within rounding of zero.
    pub alternative: Option<FrameLimit>,
}

pub fn classify_frame(measure: &Measure, c: f64) -> FrameClassification {
    if measure.contains(c) {
        return FrameClassification {
            limit: FrameLimit::InSupport { c },
            alternative: None,
        };
    }
    let gap = measure.act_galilean(-c).support_gap(0.0);
    let (a, b) = (gap.m_minus, gap.m_plus);
    let sum = a + b;
    let below = FrameLimit::Constant { value: a + c };
    let above = FrameLimit::Constant { value: b + c };
    let shock = FrameLimit::ShockWithShift { b, c };
    if sum.abs() <= SYMMETRY_TOL {
        let alternative = if sum == 0.0 {
            None
        } else if sum < 0.0 {
            Some(above)
        } else {
            Some(below)
        };
        return FrameClassification {
            limit: shock,
            alternative,
        };
    }
    let limit = if sum < 0.0 { above } else { below };
    let alternative = (b.is_finite() && sum.abs() < NEAR_DEGENERATE_REL * b).then_some(shock);
    FrameClassification { limit, alternative }
}

/// Half-width `L(t) = |t|^p` of the sampled window, `0 <= p < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub exponent: f64,
}

impl Default for Window {
    fn default() -> Self {
        Window { exponent: 0.5 }
    }
}

impl Window {
    pub fn new(exponent: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&exponent) {
            return Err(Error::InvalidParameter(format!(
                "window exponent must lie in [0, 1), got {exponent}"
            )));
        }
        Ok(Window { exponent })
    }

    pub fn width(&self, t: f64) -> f64 {
        t.abs().powf(self.exponent)
    }
}

/// The shift function `S_ε` built from the two one-sided neighbourhoods of
/// a symmetric support gap `(-b, b)`.
#[derive(Clone, Debug)]
pub struct ShiftFunction {
    plus: Measure,
    minus: Measure,
    b: f64,
    eps: f64,
}

impl ShiftFunction {
    pub fn new(shifted: &Measure, eps: f64) -> Result<Self> {
        let gap = shifted.support_gap(0.0);
        let (a, b) = (gap.m_minus, gap.m_plus);
        if gap.degenerate || !a.is_finite() || !b.is_finite() {
            return Err(Error::Precondition(
                "shift function needs support on both sides of 0".into(),
            ));
        }
        if (a + b).abs() > NEAR_DEGENERATE_REL * b {
            return Err(Error::Precondition(format!(
                "support gap ({a}, {b}) is not symmetric about 0"
            )));
        }
        if !(eps > 0.0 && eps < b) {
            return Err(Error::InvalidParameter(format!("need 0 < eps < {b}, got {eps}")));
        }
        let plus = shifted
            .restrict(b, b + eps)
            .ok_or(Error::EmptyNeighborhood { side: "right" })?;
        let minus = shifted
            .restrict(a - eps, a)
            .ok_or(Error::EmptyNeighborhood { side: "left" })?;
        Ok(ShiftFunction { plus, minus, b, eps })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `S_ε(t, x) = (1/b) ln(J⁺/J⁻)`.
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        let q = Quadrature::standard();
        let e = Exponent::burgers(t, x);
        let lp = tilt(&self.plus, e, q).log_mass();
        let lm = tilt(&self.minus, e, q).log_mass();
        (lp - lm) / self.b + x
    }

    /// The fixed point `s_ε(t) = S_ε(t, s_ε(t))`.
    pub fn fixed_point(&self, t: f64) -> Result<f64> {
        let mut x = self.eval(t, 0.0);
        let mut step = f64::INFINITY;
        for _ in 0..FIXED_POINT_MAX_ITER {
            let next = self.eval(t, x);
            step = (next - x).abs();
            x = next;
            if step < FIXED_POINT_TOL {
                return Ok(x);
            }
            if !x.is_finite() {
                break;
            }
        }
        Err(Error::NoConvergence {
            iterations: FIXED_POINT_MAX_ITER,
            last_step: step,
        })
    }
}

pub fn s_eps_fn(shifted: &Measure, eps: f64, t: f64, x: f64) -> Result<f64> {
    Ok(ShiftFunction::new(shifted, eps)?.eval(t, x))
}

pub fn s_eps(shifted: &Measure, eps: f64, t: f64) -> Result<f64> {
    ShiftFunction::new(shifted, eps)?.fixed_point(t)
}

/// `s_ε(t)` at the default `ε = b/10` compared against `ε/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftEstimate {
    pub t: f64,
    pub s: f64,
    pub s_half: f64,
    pub discrepancy: f64,
    pub consistent: bool,
}

pub fn shift_estimate(shifted: &Measure, t: f64) -> Result<ShiftEstimate> {
    let b = shifted.support_gap(0.0).m_plus;
    let eps = 0.1 * b;
    let s = s_eps(shifted, eps, t)?;
    let s_half = s_eps(shifted, 0.5 * eps, t)?;
    let discrepancy = (s - s_half).abs();
    Ok(ShiftEstimate {
        t,
        s,
        s_half,
        discrepancy,
        consistent: discrepancy <= SHIFT_CONSISTENCY_TOL,
    })
}

/// `φ_{b,-b}(y) = -b tanh(by/2)`.
pub fn symmetric_shock(b: f64, y: f64) -> f64 {
    -b * (0.5 * b * y).tanh()
}

/// Sup over `|x| <= L(t)` of `|u(t, x + ct) - predicted(x)|` on 101 points.
pub fn frame_limit_error(measure: &Measure, c: f64, t: f64, window: Window) -> Result<f64> {
    if !(t < 0.0) {
        return Err(Error::Precondition(format!("frame limits need t < 0, got {t}")));
    }
    let sol = EntireSolution::new(measure)?;
    let limit = classify_frame(measure, c).limit;
    let predicted: Box<dyn Fn(f64) -> f64> = match limit {
        FrameLimit::InSupport { c } => Box::new(move |_| c),
        FrameLimit::Constant { value } => Box::new(move |_| value),
        FrameLimit::ShockWithShift { b, c } => {
            let shifted = measure.act_galilean(-c);
            let s = s_eps(&shifted, 0.1 * b, t)?;
            Box::new(move |x| c + symmetric_shock(b, x - s))
        }
    };
    let width = window.width(t);
    let mut worst: f64 = 0.0;
    for x in linspace(-width, width, FRAME_SAMPLES)? {
        let err = (sol.eval_u(t, x + c * t) - predicted(x)).abs();
        worst = worst.max(err);
    }
    Ok(worst)
}

/// `|t|^{1/2} u(t, x |t|^{1/2})`.
pub fn atom_probe(sol: &EntireSolution, t: f64, x: f64) -> Result<f64> {
    if !(t < 0.0) {
        return Err(Error::Precondition(format!("atom probe needs t < 0, got {t}")));
    }
    let r = (-t).sqrt();
    Ok(r * sol.eval_u(t, x * r))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeError {
    pub t: f64,
    pub sup_err: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftSample {
    pub t: f64,
    pub s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AncientReport {
    pub c: f64,
    pub kind: String,
    pub value_or_pair: Vec<f64>,
    pub errors_by_t: Vec<TimeError>,
    pub s_eps_trace: Vec<ShiftSample>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alternative: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

pub fn ancient_report(measure: &Measure, c: f64, ladder: &[f64], window: Window) -> Result<AncientReport> {
    let class = classify_frame(measure, c);
    let mut errors_by_t = Vec::with_capacity(ladder.len());
    let mut s_eps_trace = Vec::new();
    let mut warnings = Vec::new();
    for &t in ladder {
        errors_by_t.push(TimeError {
            t,
            sup_err: frame_limit_error(measure, c, t, window)?,
        });
        if let FrameLimit::ShockWithShift { c, .. } = class.limit {
            let est = shift_estimate(&measure.act_galilean(-c), t)?;
            if !est.consistent {
                warnings.push(format!(
                    "s_eps and s_eps/2 differ by {:.3e} at t = {t}",
                    est.discrepancy
                ));
            }
            s_eps_trace.push(ShiftSample { t, s: est.s });
        }
    }
    Ok(AncientReport {
        c,
        kind: class.limit.kind().to_string(),
        value_or_pair: class.limit.value_or_pair(),
        errors_by_t,
        s_eps_trace,
        alternative: class.alternative.map(|a| a.kind().to_string()),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Piece;

    fn two_intervals() -> Measure {
        Measure::new(
            vec![],
            vec![Piece::uniform(-2.0, -1.0, 1.0), Piece::uniform(1.0, 2.0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn classification_examples() {
        let leb = Measure::lebesgue(-1.0, 1.0).unwrap();
        assert_eq!(classify_frame(&leb, 0.5).limit, FrameLimit::InSupport { c: 0.5 });
        assert_eq!(classify_frame(&leb, 2.0).limit, FrameLimit::Constant { value: 1.0 });
        assert_eq!(classify_frame(&leb, -3.0).limit, FrameLimit::Constant { value: -1.0 });
        assert_eq!(
            classify_frame(&two_intervals(), 0.0).limit,
            FrameLimit::ShockWithShift { b: 1.0, c: 0.0 }
        );
    }

    #[test]
    fn near_degenerate_reports_both() {
        let m = Measure::new(
            vec![],
            vec![Piece::uniform(-2.0, -1.0, 1.0), Piece::uniform(1.0 + 1e-9, 2.0, 1.0)],
        )
        .unwrap();
        let class = classify_frame(&m, 0.0);
        assert_eq!(class.limit.kind(), "Constant");
        assert_eq!(class.alternative.map(|a| a.kind()), Some("ShockWithShift"));
    }

    #[test]
    fn dirac_frame_error_is_zero() {
        let e = frame_limit_error(&Measure::dirac(0.0), 0.0, -100.0, Window::default()).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn symmetric_measure_has_zero_shift() {
        let m = two_intervals();
        assert!(s_eps_fn(&m, 0.1, -50.0, 0.0).unwrap().abs() < 1e-12);
        assert!(s_eps(&m, 0.1, -50.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn empty_neighborhood_errors() {
        let m = Measure::new(
            vec![crate::measure::Atom { z: -1.0, w: 1.0 }, crate::measure::Atom { z: 1.0, w: 1.0 }],
            vec![],
        )
        .unwrap();
        // atoms sit exactly at ±b so the neighbourhoods are non-empty
        assert!(ShiftFunction::new(&m, 0.1).is_ok());
        assert!(ShiftFunction::new(&two_intervals(), 1.5).is_err());
    }

    #[test]
    fn dirac_atom_probe_is_zero() {
        let sol = EntireSolution::new(&Measure::dirac(0.0)).unwrap();
        assert_eq!(atom_probe(&sol, -1e6, 1.0).unwrap(), 0.0);
    }
}
