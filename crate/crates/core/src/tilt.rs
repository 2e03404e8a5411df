//! Integrals of the form `∫ g(z) e^{A z² + B z + C} dμ(z)` reduced to a
//! weighted node list with the dominant exponential factored out.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::measure::{Measure, Piece};
use crate::quadrature::GaussLegendre;
use crate::special::LogReal;

const MAX_DEPTH: u32 = 40;

/// The quadratic exponent `a2 z² + a1 z + a0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent {
        a2: 0.0,
        a1: 0.0,
        a0: 0.0,
    };

    /// The Cole-Hopf weight `-z x/2 + z² t/4`.
    pub fn burgers(t: f64, x: f64) -> Self {
        Exponent {
            a2: 0.25 * t,
            a1: -0.5 * x,
            a0: 0.0,
        }
    }

    /// Absolute rounding error of `eval` on `[u, v]`, times a safety factor.
    fn rounding(&self, u: f64, v: f64) -> f64 {
        let z = u.abs().max(v.abs());
        16.0 * f64::EPSILON * (self.a0.abs() + self.a1.abs() * z + self.a2.abs() * z * z)
    }

    pub fn eval(&self, z: f64) -> f64 {
        (self.a2 * z + self.a1) * z + self.a0
    }
}

/// Gauss-Legendre order and bisection tolerance.
#[derive(Clone, Debug)]
pub struct Quadrature {
    rule: GaussLegendre,
    tol: f64,
}

impl Quadrature {
    pub const DEFAULT_ORDER: usize = 64;
    pub const DEFAULT_TOL: f64 = 1e-12;

    pub fn new(order: usize, tol: f64) -> Result<Self> {
        if order < 16 {
            return Err(Error::InvalidParameter(format!(
                "quadrature order must be at least 16, got {order}"
            )));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidParameter(format!("tolerance must lie in (0, 1), got {tol}")));
        }
        Ok(Quadrature {
            rule: GaussLegendre::new(order)?,
            tol,
        })
    }

    pub fn standard() -> &'static Quadrature {
        static Q: OnceLock<Quadrature> = OnceLock::new();
        Q.get_or_init(|| Quadrature::new(Self::DEFAULT_ORDER, Self::DEFAULT_TOL).expect("valid defaults"))
    }

    pub fn order(&self) -> usize {
        self.rule.order()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

/// Nodes `(z, w)` such that `∫ g dμ_tilted ≈ e^{log_scale} Σ g(z) w`.
#[derive(Clone, Debug)]
pub struct Tilted {
    pub log_scale: f64,
    pub nodes: Vec<(f64, f64)>,
}

impl Tilted {
    pub fn weight_sum(&self) -> f64 {
        self.nodes.iter().map(|&(_, w)| w).sum()
    }

    pub fn log_mass(&self) -> f64 {
        self.log_scale + self.weight_sum().ln()
    }

    pub fn mass(&self) -> LogReal {
        LogReal::exp(self.log_mass())
    }

    pub fn mean(&self) -> f64 {
        let (s0, s1) = self
            .nodes
            .iter()
            .fold((0.0, 0.0), |(s0, s1), &(z, w)| (s0 + w, s1 + z * w));
        s1 / s0
    }

    /// Second central moment about the tilted mean.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let (s0, s2) = self.nodes.iter().fold((0.0, 0.0), |(s0, s2), &(z, w)| {
            let d = z - m;
            (s0 + w, s2 + d * d * w)
        });
        s2 / s0
    }
}

struct Segment {
    anchor: f64,
    other: f64,
}

struct PiecePlan<'a> {
    piece: &'a Piece,
    exp: Exponent,
    panels: Vec<(f64, f64)>,
}

impl PiecePlan<'_> {
    fn integrand(&self, z: f64, reference: f64) -> f64 {
        self.piece.poly(z) * (self.exp.eval(z) - reference).exp()
    }
}

fn local_maxima_segments(a: f64, b: f64, exp: &Exponent) -> Vec<Segment> {
    let crit = if exp.a2 != 0.0 {
        Some(-exp.a1 / (2.0 * exp.a2))
    } else {
        None
    };
    match crit {
        Some(z) if exp.a2 < 0.0 && a < z && z < b => vec![
            Segment { anchor: z, other: a },
            Segment { anchor: z, other: b },
        ],
        Some(z) if exp.a2 > 0.0 && a < z && z < b => vec![
            Segment { anchor: a, other: z },
            Segment { anchor: b, other: z },
        ],
        _ => {
            if exp.eval(b) > exp.eval(a) {
                vec![Segment { anchor: b, other: a }]
            } else {
                vec![Segment { anchor: a, other: b }]
            }
        }
    }
}

fn graded_panels(seg: &Segment, exp: &Exponent, out: &mut Vec<(f64, f64)>) {
    let length = (seg.other - seg.anchor).abs();
    let dir = (seg.other - seg.anchor).signum();
    let slope = (2.0 * exp.a2 * seg.anchor + exp.a1).abs();
    let mut ell = length;
    if slope > 0.0 {
        ell = ell.min(1.0 / slope);
    }
    if exp.a2 != 0.0 {
        ell = ell.min(1.0 / exp.a2.abs().sqrt());
    }
    ell = ell.max(length * 1e-15);
    let mut d0 = 0.0;
    let mut d1 = ell;
    while d0 < length {
        let d1c = d1.min(length);
        let (p, q) = (seg.anchor + dir * d0, seg.anchor + dir * d1c);
        out.push(if p < q { (p, q) } else { (q, p) });
        d0 = d1c;
        d1 *= 2.0;
    }
}

fn gl(rule: &GaussLegendre, plan: &PiecePlan, u: f64, v: f64, reference: f64) -> f64 {
    rule.mapped(u, v).map(|(z, w)| w * plan.integrand(z, reference)).sum()
}

#[allow(clippy::too_many_arguments)]
fn refine(
    rule: &GaussLegendre,
    plan: &PiecePlan,
    u: f64,
    v: f64,
    coarse: f64,
    abs_tol: f64,
    reference: f64,
    depth: u32,
    nodes: &mut Vec<(f64, f64)>,
) {
    let mid = 0.5 * (u + v);
    let left = gl(rule, plan, u, mid, reference);
    let right = gl(rule, plan, mid, v, reference);
    let floor = plan.exp.rounding(u, v) * (left.abs() + right.abs());
    if (left + right - coarse).abs() <= abs_tol.max(floor) || depth >= MAX_DEPTH {
        for (lo, hi) in [(u, mid), (mid, v)] {
            for (z, w) in rule.mapped(lo, hi) {
                let weight = w * plan.integrand(z, reference);
                if weight != 0.0 {
                    nodes.push((z, weight));
                }
            }
        }
    } else {
        refine(rule, plan, u, mid, left, 0.5 * abs_tol, reference, depth + 1, nodes);
        refine(rule, plan, mid, v, right, 0.5 * abs_tol, reference, depth + 1, nodes);
    }
}

/// Discretizes `e^{exp(z)} dμ(z)`.
pub fn tilt(measure: &Measure, exp: Exponent, quad: &Quadrature) -> Tilted {
    let rule = &quad.rule;
    let plans: Vec<PiecePlan> = measure
        .pieces()
        .iter()
        .map(|piece| {
            let combined = Exponent {
                a2: exp.a2 + piece.exp_quad,
                a1: exp.a1 + piece.exp_rate,
                a0: exp.a0,
            };
            let mut panels = Vec::new();
            for seg in local_maxima_segments(piece.a, piece.b, &combined) {
                graded_panels(&seg, &combined, &mut panels);
            }
            PiecePlan {
                piece,
                exp: combined,
                panels,
            }
        })
        .collect();

    let atom_logs: Vec<f64> = measure
        .atoms()
        .iter()
        .map(|a| a.w.ln() + exp.eval(a.z))
        .collect();
    let piece_peaks = plans.iter().map(|plan| {
        let peak = plan
            .panels
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .map(|z| plan.exp.eval(z))
            .fold(f64::NEG_INFINITY, f64::max);
        let pmax = plan
            .panels
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .map(|z| plan.piece.poly(z).abs())
            .fold(0.0f64, f64::max);
        peak + pmax.max(f64::MIN_POSITIVE).ln()
    });
    let reference = atom_logs
        .iter()
        .copied()
        .chain(piece_peaks)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut nodes: Vec<(f64, f64)> = measure
        .atoms()
        .iter()
        .zip(&atom_logs)
        .map(|(a, &l)| (a.z, (l - reference).exp()))
        .filter(|&(_, w)| w != 0.0)
        .collect();

    let coarse: Vec<Vec<f64>> = plans
        .iter()
        .map(|plan| {
            plan.panels
                .iter()
                .map(|&(u, v)| gl(rule, plan, u, v, reference))
                .collect()
        })
        .collect();
    let total: f64 = nodes.iter().map(|&(_, w)| w).sum::<f64>()
        + coarse.iter().flatten().map(|c| c.abs()).sum::<f64>();
    let panel_count: usize = plans.iter().map(|p| p.panels.len()).sum::<usize>().max(1);
    let abs_tol = quad.tol * total / panel_count as f64;

    for (plan, estimates) in plans.iter().zip(&coarse) {
        for (&(u, v), &c) in plan.panels.iter().zip(estimates) {
            refine(rule, plan, u, v, c, abs_tol, reference, 0, &mut nodes);
        }
    }
    Tilted {
        log_scale: reference,
        nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lebesgue_mass() {
        let m = Measure::lebesgue(-1.0, 1.0).unwrap();
        let t = tilt(&m, Exponent::ZERO, Quadrature::standard());
        assert!((t.log_mass().exp() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sharp_gaussian_peak() {
        // ∫_{-1}^{1} e^{-a z²} dz ≈ sqrt(π/a) for large a
        let m = Measure::lebesgue(-1.0, 1.0).unwrap();
        let a = 1e6;
        let e = Exponent { a2: -a, a1: 0.0, a0: 0.0 };
        let t = tilt(&m, e, Quadrature::standard());
        let exact = (std::f64::consts::PI / a).sqrt();
        assert!((t.log_mass() - exact.ln()).abs() < 1e-12);
    }

    #[test]
    fn convex_exponent_two_peaks() {
        // ∫_{-1}^{1} e^{s z²} dz with s large
        let m = Measure::lebesgue(-1.0, 1.0).unwrap();
        let s: f64 = 400.0;
        let e = Exponent { a2: s, a1: 0.0, a0: 0.0 };
        let t = tilt(&m, e, Quadrature::standard());
        // 2 e^{s} D(√s)/√s
        let exact = s + (2.0 * crate::special::dawson(s.sqrt()) / s.sqrt()).ln();
        assert!((t.log_mass() - exact).abs() < 1e-12);
        assert!(t.mean().abs() < 1e-12);
    }

    #[test]
    fn huge_exponents_stay_finite() {
        let m = Measure::lebesgue(-1.0, 1.0).unwrap();
        let t = tilt(&m, Exponent::burgers(-1e9, 3e5), Quadrature::standard());
        assert!(t.log_mass().is_finite());
        assert!(t.mean().is_finite());
    }
}
