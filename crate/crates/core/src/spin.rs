//! Spin-J representation matrices and coherent spin states.
//!
//! Basis order is `m = J, J-1, ..., -J`; index `k` holds `m = J - k`.
//! Coherent-state amplitudes use the phase `e^{i(J-m) phi}`, which makes the
//! Berezin images of `(J+1) sin(theta) cos(phi)` and `(J+1) sin(theta) sin(phi)`
//! exactly `S_x` and `S_y`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::poly::{binomial, Axis};

#[derive(Debug, Clone)]
pub struct SpinRepresentation {
    two_j: u32,
    pub s_x: ComplexMatrix,
    pub s_y: ComplexMatrix,
    pub s_z: ComplexMatrix,
}

impl SpinRepresentation {
    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn spin(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn component(&self, axis: Axis) -> &ComplexMatrix {
        match axis {
            Axis::X => &self.s_x,
            Axis::Y => &self.s_y,
            Axis::Z => &self.s_z,
        }
    }

    /// `S_+`, raising `m` by one.
    pub fn raising(&self) -> ComplexMatrix {
        raising(self.two_j)
    }

    pub fn lowering(&self) -> ComplexMatrix {
        raising(self.two_j).adjoint()
    }
}

fn raising(two_j: u32) -> ComplexMatrix {
    let dim = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut sp = ComplexMatrix::zeros(dim, dim);
    // <m+1|S_+|m> sits at (k-1, k) for m = J - k.
    for k in 1..dim {
        let m = j - k as f64;
        sp[(k - 1, k)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    sp
}

pub fn spin_matrices(two_j: u32) -> Result<SpinRepresentation> {
    if two_j == 0 {
        return Err(Error::InvalidInput("two_j must be at least 1".into()));
    }
    let dim = two_j as usize + 1;
    crate::error::check_dim(dim)?;
    let j = two_j as f64 / 2.0;
    let sp = raising(two_j);
    let sm = sp.adjoint();
    let s_x = (&sp + &sm).scale_real(0.5);
    let s_y = (&sp - &sm).scale(Complex64::new(0.0, -0.5));
    let s_z = ComplexMatrix::from_diag(&(0..dim).map(|k| j - k as f64).collect::<Vec<_>>());
    Ok(SpinRepresentation { two_j, s_x, s_y, s_z })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    pub two_j: u32,
    pub theta: f64,
    pub phi: f64,
    pub amplitudes: Vec<Complex64>,
}

/// Magnitudes `sqrt(C(2J, J+m)) cos(θ/2)^{J+m} sin(θ/2)^{J-m}` in basis
/// order. These carry all the `theta` dependence.
pub fn coherent_magnitudes(two_j: u32, theta: f64) -> Vec<f64> {
    let (s, c) = (theta / 2.0).sin_cos();
    (0..=two_j)
        .map(|k| {
            // k = J - m, so J + m = two_j - k.
            binomial(two_j, k).sqrt() * c.powi((two_j - k) as i32) * s.powi(k as i32)
        })
        .collect()
}

pub fn coherent_state(two_j: u32, theta: f64, phi: f64) -> Result<CoherentState> {
    if two_j == 0 {
        return Err(Error::InvalidInput("two_j must be at least 1".into()));
    }
    let amplitudes = coherent_magnitudes(two_j, theta)
        .into_iter()
        .enumerate()
        .map(|(k, r)| Complex64::from_polar(r, k as f64 * phi))
        .collect();
    Ok(CoherentState { two_j, theta, phi, amplitudes })
}

impl CoherentState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn expectation(&self, op: &ComplexMatrix) -> Complex64 {
        op.expectation(&self.amplitudes)
    }
}

/// `|Ω><Ω|`.
pub fn coherent_projector(state: &CoherentState) -> ComplexMatrix {
    ComplexMatrix::outer(&state.amplitudes, &state.amplitudes)
}

/// `exp(-i phi S_z)`, diagonal in this basis.
pub fn z_rotation(two_j: u32, phi: f64) -> ComplexMatrix {
    let j = two_j as f64 / 2.0;
    let diag: Vec<Complex64> = (0..=two_j)
        .map(|k| Complex64::from_polar(1.0, -(j - k as f64) * phi))
        .collect();
    ComplexMatrix::from_diag_complex(&diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{spectral_norm, I};

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn spin_half_by_hand() {
        let s = spin_matrices(1).unwrap();
        assert!(close(&s.s_z, &ComplexMatrix::from_diag(&[0.5, -0.5]), 0.0));
        let sx = ComplexMatrix::from_real_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        assert!(close(&s.s_x, &sx, 1e-16));
        assert!(s.s_x.adjoint() == s.s_x);
    }

    #[test]
    fn spin_one_norms() {
        let s = spin_matrices(2).unwrap();
        assert!((spectral_norm(&s.s_y) - 1.0).abs() < 1e-14);
        let e = crate::linalg::hermitian_eig(&s.s_z).unwrap();
        assert_eq!(e.values, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn commutation_and_casimir() {
        for two_j in 1..=12 {
            let s = spin_matrices(two_j).unwrap();
            let j = two_j as f64 / 2.0;
            let pairs = [(&s.s_x, &s.s_y, &s.s_z), (&s.s_y, &s.s_z, &s.s_x), (&s.s_z, &s.s_x, &s.s_y)];
            for (a, b, c) in pairs {
                let lhs = a.commutator(b).unwrap();
                assert!(close(&lhs, &c.scale(I), 1e-12), "two_j={two_j}");
            }
            let cas = &(&(&s.s_x * &s.s_x) + &(&s.s_y * &s.s_y)) + &(&s.s_z * &s.s_z);
            let expect = ComplexMatrix::identity(s.dim()).scale_real(j * (j + 1.0));
            assert!(close(&cas, &expect, 1e-12));
        }
        assert!(spin_matrices(0).is_err());
    }

    #[test]
    fn coherent_examples() {
        let n = coherent_state(1, 0.0, 1.234).unwrap();
        assert_eq!(n.amplitudes, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let e = coherent_state(1, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.amplitudes[0] - h).norm() < 1e-15 && (e.amplitudes[1] - h).norm() < 1e-15);
        for two_j in 1..=8 {
            let s = coherent_state(two_j, 0.0, 0.3).unwrap();
            assert_eq!(s.amplitudes[0], Complex64::new(1.0, 0.0));
            for &t in &[0.2, 1.0, 2.5] {
                let st = coherent_state(two_j, t, 0.7).unwrap();
                assert!((st.norm() - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn lower_symbols_of_spin_components() {
        // Independent oracle: explicit sums over the amplitudes.
        for two_j in 1..=8 {
            let j = two_j as f64 / 2.0;
            let s = spin_matrices(two_j).unwrap();
            for &(t, ph) in &[(0.3, 0.2), (1.4, 2.9), (2.8, 5.1)] {
                let st = coherent_state(two_j, t, ph).unwrap();
                let mut sz = 0.0;
                for (k, a) in st.amplitudes.iter().enumerate() {
                    sz += (j - k as f64) * a.norm_sqr();
                }
                assert!((sz - j * f64::cos(t)).abs() < 1e-13);
                let sx = st.expectation(&s.s_x);
                let sy = st.expectation(&s.s_y);
                assert!((sx.re - j * t.sin() * ph.cos()).abs() < 1e-13);
                assert!((sy.re - j * t.sin() * ph.sin()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn projector_properties() {
        let p0 = coherent_projector(&coherent_state(3, 0.0, 0.0).unwrap());
        assert!(close(&p0, &ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]), 0.0));
        let p = coherent_projector(&coherent_state(5, 1.1, 2.2).unwrap());
        assert!(close(&(&p * &p), &p, 1e-13));
        assert!((p.trace().re - 1.0).abs() < 1e-13);
        assert!(p.is_hermitian());
    }

    #[test]
    fn overlap_is_geodesic_power() {
        for two_j in 1..=6 {
            let (a, b) = ((0.4, 0.3), (1.9, 4.0));
            let sa = coherent_state(two_j, a.0, a.1).unwrap();
            let sb = coherent_state(two_j, b.0, b.1).unwrap();
            let mut ov = Complex64::new(0.0, 0.0);
            for k in 0..=two_j as usize {
                ov += sa.amplitudes[k].conj() * sb.amplitudes[k];
            }
            let na = crate::poly::cartesian(a.0, a.1);
            let nb = crate::poly::cartesian(b.0, b.1);
            let cos_big = na[0] * nb[0] + na[1] * nb[1] + na[2] * nb[2];
            let half = (cos_big.acos() / 2.0).cos();
            assert!((ov.norm_sqr() - half.powi(2 * two_j as i32)).abs() < 1e-13);
        }
    }

    #[test]
    fn rotation_covariance() {
        for two_j in [1, 4, 7] {
            let (t, ph) = (1.2, 0.9);
            let p = coherent_projector(&coherent_state(two_j, t, ph).unwrap());
            let r = z_rotation(two_j, ph);
            // e^{-iφS_z} maps the φ = 0 state to the φ state up to phase, so
            // conjugating back recovers the φ = 0 projector.
            let back = &(&r.adjoint() * &p) * &r;
            let p0 = coherent_projector(&coherent_state(two_j, t, 0.0).unwrap());
            assert!(close(&back, &p0, 1e-12));
        }
    }
}
