//! Compactly supported positive measures and the Burgers symmetry actions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tilt::{tilt, Exponent, Quadrature};

const CHEBYSHEV_SAMPLES: usize = 64;
const NONNEGATIVITY_SLACK: f64 = 1e-12;

/// A point mass `w·δ_z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub z: f64,
    pub w: f64,
}

/// Density `p(z)·e^{r z + q z²}` on `[a, b]`, with `p` given by coefficients
/// in increasing powers of `z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
    #[serde(default)]
    pub exp_rate: f64,
    #[serde(default)]
    pub exp_quad: f64,
}

impl Piece {
    /// Constant density `value` on `[a, b]`.
    pub fn uniform(a: f64, b: f64, value: f64) -> Self {
        Piece {
            a,
            b,
            coeffs: vec![value],
            exp_rate: 0.0,
            exp_quad: 0.0,
        }
    }

    pub fn poly(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn density(&self, z: f64) -> f64 {
        self.poly(z) * (self.exp_rate * z + self.exp_quad * z * z).exp()
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(Error::InvalidMeasure(format!(
                "piece interval [{}, {}] must be finite with a < b",
                self.a, self.b
            )));
        }
        if self.coeffs.is_empty() || self.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidMeasure(
                "piece coefficients must be a non-empty list of finite numbers".into(),
            ));
        }
        if !(self.exp_rate.is_finite() && self.exp_quad.is_finite()) {
            return Err(Error::InvalidMeasure("exponential tags must be finite".into()));
        }
        let mid = 0.5 * (self.a + self.b);
        let half = 0.5 * (self.b - self.a);
        let samples = (0..CHEBYSHEV_SAMPLES)
            .map(|k| {
                let theta = std::f64::consts::PI * (k as f64 + 0.5) / CHEBYSHEV_SAMPLES as f64;
                mid + half * theta.cos()
            })
            .chain([self.a, self.b]);
        let values: Vec<f64> = samples.map(|z| self.poly(z)).collect();
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Err(Error::InvalidMeasure(format!(
                "density on [{}, {}] vanishes identically",
                self.a, self.b
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v < -NONNEGATIVITY_SLACK * scale) {
            return Err(Error::InvalidMeasure(format!(
                "density on [{}, {}] takes the negative value {v}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Nearest support points on either side of a frame speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportGap {
    pub m_minus: f64,
    pub m_plus: f64,
    /// Set when the queried speed lies in the support.
    pub degenerate: bool,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    pieces: Vec<Piece>,
}

/// A finite positive measure with bounded support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct Measure {
    atoms: Vec<Atom>,
    pieces: Vec<Piece>,
    alpha: f64,
    beta: f64,
}

impl TryFrom<MeasureRepr> for Measure {
    type Error = Error;
    fn try_from(r: MeasureRepr) -> Result<Self> {
        Measure::new(r.atoms, r.pieces)
    }
}

impl From<Measure> for MeasureRepr {
    fn from(m: Measure) -> Self {
        MeasureRepr {
            atoms: m.atoms,
            pieces: m.pieces,
        }
    }
}

impl Measure {
    pub fn new(atoms: Vec<Atom>, mut pieces: Vec<Piece>) -> Result<Self> {
        if atoms.is_empty() && pieces.is_empty() {
            return Err(Error::ZeroMeasure);
        }
        for atom in &atoms {
            if !atom.z.is_finite() {
                return Err(Error::InvalidMeasure(format!("atom location {} is not finite", atom.z)));
            }
            if !(atom.w > 0.0 && atom.w.is_finite()) {
                return Err(Error::InvalidMeasure(format!(
                    "atom at {} has non-positive weight {}",
                    atom.z, atom.w
                )));
            }
        }
        for piece in &pieces {
            piece.validate()?;
        }
        pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
        for pair in pieces.windows(2) {
            if pair[1].a < pair[0].b {
                return Err(Error::InvalidMeasure(format!(
                    "pieces [{}, {}] and [{}, {}] overlap",
                    pair[0].a, pair[0].b, pair[1].a, pair[1].b
                )));
            }
        }
        let lows = atoms.iter().map(|a| a.z).chain(pieces.iter().map(|p| p.a));
        let highs = atoms.iter().map(|a| a.z).chain(pieces.iter().map(|p| p.b));
        let alpha = lows.fold(f64::INFINITY, f64::min);
        let beta = highs.fold(f64::NEG_INFINITY, f64::max);
        let m = Measure {
            atoms,
            pieces,
            alpha,
            beta,
        };
        let log_mass = m.log_mass();
        if !log_mass.is_finite() {
            return Err(Error::InvalidMeasure(format!(
                "total mass e^{log_mass} is not a positive finite number"
            )));
        }
        Ok(m)
    }

    pub fn dirac(z: f64) -> Self {
        Measure::new(vec![Atom { z, w: 1.0 }], vec![]).expect("finite atom")
    }

    /// Lebesgue measure on `[a, b]`.
    pub fn lebesgue(a: f64, b: f64) -> Result<Self> {
        Measure::new(vec![], vec![Piece::uniform(a, b, 1.0)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Serialization(e.to_string())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measures serialize")
    }

    /// `(inf supp, sup supp)`.
    pub fn support(&self) -> (f64, f64) {
        (self.alpha, self.beta)
    }

    pub fn total_mass(&self) -> f64 {
        self.log_mass().exp()
    }

    pub fn log_mass(&self) -> f64 {
        tilt(self, Exponent::ZERO, Quadrature::standard()).log_mass()
    }

    pub fn normalize(&self) -> Result<Self> {
        let log_mass = self.log_mass();
        if !log_mass.is_finite() {
            return Err(Error::ZeroMeasure);
        }
        Ok(self.scaled((-log_mass).exp()))
    }

    fn scaled(&self, factor: f64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom { z: a.z, w: a.w * factor })
            .collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                coeffs: p.coeffs.iter().map(|c| c * factor).collect(),
                ..p.clone()
            })
            .collect();
        Measure {
            atoms,
            pieces,
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    pub fn contains(&self, c: f64) -> bool {
        self.atoms.iter().any(|a| a.z == c) || self.pieces.iter().any(|p| p.a <= c && c <= p.b)
    }

    pub fn support_gap(&self, c: f64) -> SupportGap {
        if self.contains(c) {
            return SupportGap {
                m_minus: c,
                m_plus: c,
                degenerate: true,
            };
        }
        let mut m_minus = f64::NEG_INFINITY;
        let mut m_plus = f64::INFINITY;
        let intervals = self
            .atoms
            .iter()
            .map(|a| (a.z, a.z))
            .chain(self.pieces.iter().map(|p| (p.a, p.b)));
        for (lo, hi) in intervals {
            if hi < c {
                m_minus = m_minus.max(hi);
            }
            if lo > c {
                m_plus = m_plus.min(lo);
            }
        }
        SupportGap {
            m_minus,
            m_plus,
            degenerate: false,
        }
    }

    /// The restriction to `[lo, hi]`, or `None` when it carries no mass.
    pub fn restrict(&self, lo: f64, hi: f64) -> Option<Self> {
        let atoms: Vec<Atom> = self
            .atoms
            .iter()
            .filter(|a| lo <= a.z && a.z <= hi)
            .copied()
            .collect();
        let pieces: Vec<Piece> = self
            .pieces
            .iter()
            .filter_map(|p| {
                let a = p.a.max(lo);
                let b = p.b.min(hi);
                (a < b).then(|| Piece { a, b, ..p.clone() })
            })
            .collect();
        Measure::new(atoms, pieces).ok()
    }

    /// Reweights by `e^{z x0/2}`, so `u(t,x) ↦ u(t, x - x0)`.
    pub fn act_translate(&self, x0: f64) -> Self {
        self.reweight(0.5 * x0, 0.0)
    }

    /// Reweights by `e^{z² t0/4}`, so `u(t,x) ↦ u(t + t0, x)`.
    pub fn act_timeshift(&self, t0: f64) -> Self {
        self.reweight(0.0, 0.25 * t0)
    }

    fn reweight(&self, rate: f64, quad: f64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                z: a.z,
                w: a.w * (rate * a.z + quad * a.z * a.z).exp(),
            })
            .collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                exp_rate: p.exp_rate + rate,
                exp_quad: p.exp_quad + quad,
                ..p.clone()
            })
            .collect();
        Measure {
            atoms,
            pieces,
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    /// Translates the support by `c`, so `u(t,x) ↦ u(t, x - ct) + c`.
    pub fn act_galilean(&self, c: f64) -> Self {
        let atoms = self.atoms.iter().map(|a| Atom { z: a.z + c, w: a.w }).collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let shifted = taylor_shift(&p.coeffs, -c);
                // r(z-c) + q(z-c)^2 = q z^2 + (r - 2qc) z + (q c^2 - r c)
                let constant = p.exp_quad * c * c - p.exp_rate * c;
                let factor = constant.exp();
                Piece {
                    a: p.a + c,
                    b: p.b + c,
                    coeffs: shifted.into_iter().map(|k| k * factor).collect(),
                    exp_rate: p.exp_rate - 2.0 * p.exp_quad * c,
                    exp_quad: p.exp_quad,
                }
            })
            .collect();
        Measure {
            atoms,
            pieces,
            alpha: self.alpha + c,
            beta: self.beta + c,
        }
    }

    /// Pushforward under `z ↦ λz`, so `u(t,x) ↦ λ u(λ² t, λ x)`.
    pub fn act_scale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive, got {lambda}"
            )));
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                z: a.z * lambda,
                w: a.w,
            })
            .collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let mut scale = 1.0 / lambda;
                let coeffs = p
                    .coeffs
                    .iter()
                    .map(|&k| {
                        let v = k * scale;
                        scale /= lambda;
                        v
                    })
                    .collect();
                Piece {
                    a: p.a * lambda,
                    b: p.b * lambda,
                    coeffs,
                    exp_rate: p.exp_rate / lambda,
                    exp_quad: p.exp_quad / (lambda * lambda),
                }
            })
            .collect();
        Ok(Measure {
            atoms,
            pieces,
            alpha: self.alpha * lambda,
            beta: self.beta * lambda,
        })
    }

    /// Sum of two measures with disjoint piece interiors.
    pub fn plus(&self, other: &Measure) -> Result<Self> {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Measure::new(atoms, pieces)
    }
}

/// Coefficients of `p(z + s)` from those of `p(z)`.
pub(crate) fn taylor_shift(coeffs: &[f64], s: f64) -> Vec<f64> {
    let mut out = coeffs.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            out[j] += s * out[j + 1];
        }
    }
    out
}
