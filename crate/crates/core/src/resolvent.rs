//! Resolvent of a non-interacting pair `H = H1 ⊗ 1 + 1 ⊗ H2` as a contour
//! integral of one-particle resolvents:
//!
//! `(iλ - H)^{-1} = (1/2πi) ∮ (iλ - z - H1)^{-1} ⊗ (z - H2)^{-1} dz`
//!
//! over an ellipse around `spec(H2)` that keeps the line `Im z = λ` outside.
//! The integral is taken with the periodic trapezoid rule.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, kron_sum, spectral_norm, ComplexMatrix, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub center: f64,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub nodes: usize,
}

impl ContourSpec {
    /// `z(s) = center + a cos s + i b sin s`.
    pub fn point(&self, s: f64) -> Complex64 {
        Complex64::new(self.center + self.semi_major * s.cos(), self.semi_minor * s.sin())
    }

    pub fn derivative(&self, s: f64) -> Complex64 {
        Complex64::new(-self.semi_major * s.sin(), self.semi_minor * s.cos())
    }

    /// Nodes `z(s_m)` with trapezoid weights `z'(s_m) 2π/M`.
    pub fn quadrature(&self) -> Vec<(Complex64, Complex64)> {
        let h = TAU / self.nodes as f64;
        (0..self.nodes)
            .map(|m| {
                let s = h * m as f64;
                (self.point(s), self.derivative(s) * h)
            })
            .collect()
    }

    /// Checks that `spec(H2)` sits strictly inside the real interval of the
    /// ellipse and that `Im z = λ` misses it.
    pub fn validate(&self, spectrum: &[f64], lambda: f64) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::InvalidInput("contour needs at least one node".into()));
        }
        if !(self.semi_major > 0.0 && self.semi_minor > 0.0) {
            return Err(Error::InvalidInput("ellipse semi-axes must be positive".into()));
        }
        if self.semi_minor >= lambda.abs() {
            return Err(Error::InvalidInput(format!(
                "semi-minor axis {} reaches the pole line Im z = {lambda}",
                self.semi_minor
            )));
        }
        let (lo, hi) = (self.center - self.semi_major, self.center + self.semi_major);
        if let Some(e) = spectrum.iter().find(|e| **e <= lo || **e >= hi) {
            return Err(Error::InvalidInput(format!("eigenvalue {e} is not inside ({lo}, {hi})")));
        }
        Ok(())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!(
            "lambda must be finite and nonzero (iλ on the real spectrum line), got {lambda}"
        )));
    }
    Ok(())
}

pub fn build_contour(h2: &ComplexMatrix, lambda: f64, nodes: usize) -> Result<ContourSpec> {
    check_lambda(lambda)?;
    if nodes == 0 {
        return Err(Error::InvalidInput("contour needs at least one node".into()));
    }
    let values = hermitian_eig(h2)?.values;
    let (lo, hi) = (values[0], values[values.len() - 1]);
    Ok(ContourSpec {
        center: 0.5 * (lo + hi),
        semi_major: 0.5 * (hi - lo) + 1.0,
        semi_minor: 0.5 * lambda.abs(),
        nodes,
    })
}

/// Trapezoid approximation of `(iλ - H1 ⊗ 1 - 1 ⊗ H2)^{-1}`.
pub fn resolvent_sum(h1: &ComplexMatrix, h2: &ComplexMatrix, lambda: f64, contour: &ContourSpec) -> Result<ComplexMatrix> {
    check_lambda(lambda)?;
    h1.ensure_hermitian()?;
    let spectrum = hermitian_eig(h2)?.values;
    contour.validate(&spectrum, lambda)?;
    let (n1, n2) = (h1.rows(), h2.rows());
    let mut acc = ComplexMatrix::zeros(n1 * n2, n1 * n2);
    let shift = |c: Complex64, h: &ComplexMatrix, sign: f64| {
        let mut m = h.scale_real(sign);
        for k in 0..h.rows() {
            m[(k, k)] += c;
        }
        m
    };
    for (z, w) in contour.quadrature() {
        // (iλ - z - H1)^{-1} and (z - H2)^{-1}
        let r1 = shift(Complex64::new(0.0, lambda) - z, h1, -1.0).inverse()?;
        let r2 = shift(z, h2, -1.0).inverse()?;
        acc += &kron(&r1, &r2)?.scale(w);
    }
    Ok(acc.scale(Complex64::new(0.0, -1.0 / (2.0 * PI))))
}

/// `(iλ - H)^{-1}` by a direct solve.
pub fn direct_resolvent(h1: &ComplexMatrix, h2: &ComplexMatrix, lambda: f64) -> Result<ComplexMatrix> {
    check_lambda(lambda)?;
    let h = kron_sum(&[h1.clone(), h2.clone()])?;
    let mut m = -&h;
    for k in 0..h.rows() {
        m[(k, k)] += Complex64::new(0.0, lambda);
    }
    m.inverse()
}

/// `‖resolvent_sum - (iλ - H)^{-1}‖ / ‖(iλ - H)^{-1}‖` on the default contour
/// with `nodes` points.
pub fn resolvent_error(h1: &ComplexMatrix, h2: &ComplexMatrix, lambda: f64, nodes: usize) -> Result<f64> {
    let contour = build_contour(h2, lambda, nodes)?;
    let approx = resolvent_sum(h1, h2, lambda, &contour)?;
    let exact = direct_resolvent(h1, h2, lambda)?;
    let diff = &approx - &exact;
    if diff.data().iter().all(|c| *c == ZERO) {
        return Ok(0.0);
    }
    Ok(spectral_norm(&diff) / spectral_norm(&exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    fn canonical() -> (ComplexMatrix, ComplexMatrix) {
        (ComplexMatrix::from_diag(&[0.0, 1.0]), ComplexMatrix::from_diag(&[0.0, 2.0]))
    }

    #[test]
    fn contour_examples() {
        let (_, h2) = canonical();
        let c = build_contour(&h2, 1.0, 32).unwrap();
        assert_eq!((c.center, c.semi_major, c.semi_minor), (1.0, 2.0, 0.5));
        c.validate(&[0.0, 2.0], 1.0).unwrap();
        assert!(c.validate(&[0.0, 3.5], 1.0).is_err());
        assert!(c.validate(&[0.0], 0.4).is_err());
        assert!(build_contour(&h2, 0.0, 32).is_err());
        let w: Complex64 = c.quadrature().iter().map(|(_, w)| *w).sum();
        assert!(w.norm() < 1e-14);
    }

    #[test]
    fn canonical_sample() {
        let (h1, h2) = canonical();
        let c = build_contour(&h2, 1.0, 256).unwrap();
        let r = resolvent_sum(&h1, &h2, 1.0, &c).unwrap();
        // kron(diag(0,1), 1) + kron(1, diag(0,2)) has diagonal 0, 2, 1, 3.
        for (k, s) in [0.0, 2.0, 1.0, 3.0].into_iter().enumerate() {
            let exact = (I - s).inv();
            assert!((r[(k, k)] - exact).norm() <= 1e-8 * exact.norm());
        }
        assert!((r[(0, 0)] + I).norm() < 1e-8);
        assert!(resolvent_error(&h1, &h2, 1.0, 256).unwrap() <= 1e-8);
    }

    #[test]
    fn convergence_and_symmetry() {
        let (h1, h2) = canonical();
        let e16 = resolvent_error(&h1, &h2, 1.0, 16).unwrap();
        let e32 = resolvent_error(&h1, &h2, 1.0, 32).unwrap();
        let e64 = resolvent_error(&h1, &h2, 1.0, 64).unwrap();
        assert!(e32 < e16 / 10.0 && e64 < e32, "{e16} {e32} {e64}");
        let flipped = resolvent_error(&h1, &h2, -1.0, 64).unwrap();
        assert!((flipped - e64).abs() <= 1e-3 * e64 + 1e-15, "{flipped} vs {e64}");
    }

    #[test]
    fn identity_check() {
        let (h1, h2) = canonical();
        let c = build_contour(&h2, 1.0, 128).unwrap();
        let r = resolvent_sum(&h1, &h2, 1.0, &c).unwrap();
        let err = resolvent_error(&h1, &h2, 1.0, 128).unwrap();
        let mut m = -&kron_sum(&[h1, h2]).unwrap();
        for k in 0..4 {
            m[(k, k)] += I;
        }
        let res = (&(&m * &r) - &ComplexMatrix::identity(4)).max_abs();
        assert!(res <= 10.0 * err.max(1e-15), "{res} vs {err}");
    }
}
