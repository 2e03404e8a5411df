//! Dense real polynomials in increasing-power form.

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![0.0]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// `q(s) = p(x0 + sign·s)`.
    pub fn recentred(&self, x0: f64, sign: f64) -> Polynomial {
        let mut out = crate::measure::taylor_shift(&self.coeffs, x0);
        let mut f = 1.0;
        for c in out.iter_mut() {
            *c *= f;
            f *= sign;
        }
        Polynomial::new(out)
    }

    pub fn add_linear(&self, c0: f64, c1: f64) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < 2 {
            coeffs.resize(2, 0.0);
        }
        coeffs[0] += c0;
        coeffs[1] += c1;
        Polynomial::new(coeffs)
    }

    pub fn with_constant(&self, c0: f64) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = c0;
        Polynomial::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_and_recentre() {
        let p = Polynomial::new(vec![1.0, -1.0, 0.0, 2.0]);
        assert_eq!(p.derivative().coeffs(), &[-1.0, 0.0, 6.0]);
        let q = p.recentred(0.5, -1.0);
        for s in [-1.0, 0.0, 0.7] {
            assert!((q.eval(s) - p.eval(0.5 - s)).abs() < 1e-14);
        }
    }
}
