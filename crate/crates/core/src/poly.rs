//! Dense univariate polynomials with real coefficients, just enough to form
//! a fixed-degree resultant and extract its real roots.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Coefficients in ascending order: `c[0] + c[1] x + c[2] x^2 + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        Poly(coeffs.into())
    }

    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Drops leading coefficients below `rel_tol` times the largest one.
    pub fn trimmed(&self, rel_tol: f64) -> Poly {
        let scale = self.max_abs_coeff();
        let mut c = self.0.clone();
        while c.len() > 1 && c.last().is_some_and(|x| x.abs() <= rel_tol * scale) {
            c.pop();
        }
        Poly(c)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (j, a) in self.0.iter().enumerate() {
            for (k, b) in other.0.iter().enumerate() {
                out[j + k] += a * b;
            }
        }
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n)
            .map(|k| self.0.get(k).copied().unwrap_or(0.0) + other.0.get(k).copied().unwrap_or(0.0))
            .collect())
    }

    pub fn scale(&self, f: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * f).collect())
    }

    /// All complex roots, as eigenvalues of the companion matrix of the
    /// monic polynomial. Leading coefficients must already be trimmed.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = self.0[n];
        if n == 1 {
            return vec![Complex64::new(-self.0[0] / lead, 0.0)];
        }
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            m[(k, k - 1)] = 1.0;
        }
        for k in 0..n {
            m[(k, n - 1)] = -self.0[k] / lead;
        }
        m.complex_eigenvalues().iter().copied().collect()
    }

    /// Real roots (plus real parts of nearly-real complex roots), each
    /// refined by a few Newton steps, sorted ascending.
    pub fn real_roots(&self, imag_tol: f64) -> Vec<f64> {
        let dp = self.derivative();
        let mut roots: Vec<f64> = self
            .complex_roots()
            .into_iter()
            .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs()))
            .map(|z| self.newton(&dp, z.re))
            .collect();
        roots.sort_by(f64::total_cmp);
        roots
    }

    fn newton(&self, dp: &Poly, mut x: f64) -> f64 {
        let mut best = (self.eval(x).abs(), x);
        for _ in 0..8 {
            let d = dp.eval(x);
            if d == 0.0 {
                break;
            }
            x -= self.eval(x) / d;
            let r = self.eval(x).abs();
            if !r.is_finite() {
                break;
            }
            if r < best.0 {
                best = (r, x);
            }
        }
        best.1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        let p = Poly::new([1.0, -3.0, 0.0, 2.0]);
        assert_eq!(p.eval(2.0), 1.0 - 6.0 + 16.0);
        assert_eq!(p.derivative(), Poly::new([-3.0, 0.0, 6.0]));
    }

    #[test]
    fn product_and_sum() {
        let a = Poly::new([1.0, 1.0]);
        let b = Poly::new([-1.0, 1.0]);
        assert_eq!(a.mul(&b), Poly::new([-1.0, 0.0, 1.0]));
        assert_eq!(a.add(&Poly::new([0.0, 0.0, 5.0])), Poly::new([1.0, 1.0, 5.0]));
    }

    #[test]
    fn quartic_with_known_roots() {
        // (x - 0.1)(x - 0.35)(x + 2)(x^2 + 1) / (x^2 + 1) -> use four real roots
        let roots = [0.1, 0.35, -2.0, 7.5];
        let p = roots
            .iter()
            .fold(Poly::constant(3.0), |acc, r| acc.mul(&Poly::new([-r, 1.0])));
        let found = p.real_roots(1e-9);
        let mut want = roots.to_vec();
        want.sort_by(f64::total_cmp);
        assert_eq!(found.len(), 4);
        for (f, w) in found.iter().zip(&want) {
            assert!((f - w).abs() < 1e-12, "{f} vs {w}");
        }
    }

    #[test]
    fn complex_pair_is_excluded() {
        let p = Poly::new([1.0, 0.0, 1.0]).mul(&Poly::new([-0.5, 1.0]));
        let found = p.real_roots(1e-9);
        assert_eq!(found.len(), 1);
        assert!((found[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn trimming_drops_negligible_leading_terms() {
        let p = Poly::new([1.0, 2.0, 1e-20]).trimmed(1e-14);
        assert_eq!(p.degree(), 1);
    }
}
