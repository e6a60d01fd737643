//! Gibbs states, the complex-time Heisenberg flow and the KMS boundary
//! condition at finite dimension.
//!
//! Two-point functions `F(w) = ω(a φ_w(b))` are evaluated in the eigenbasis
//! of `H`, where `φ_w` is diagonal: `φ_w(b)_{lj} = e^{iw(λ_l - λ_j)} b_{lj}`.
//! This keeps `e^{±βH}` out of the arithmetic, so the boundary identity is
//! checked at rounding level even when `β‖H‖` is sizable.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, kron_sum, spectral_norm, ComplexMatrix, HermitianEigen, ZERO};
use crate::poly::SitePolynomial;
use crate::quant::quantize_site;
use crate::report::SweepReport;
use crate::spin::coherent_state;
use crate::verify::check_range;

pub const STATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct GibbsState {
    hamiltonian: ComplexMatrix,
    beta: f64,
    rho: ComplexMatrix,
    eigen: HermitianEigen,
    /// `rho` in the eigenbasis of the Hamiltonian.
    rho_eigen: ComplexMatrix,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("beta must be positive and finite, got {beta}")));
    }
    Ok(())
}

fn in_basis(u: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    &(&u.adjoint() * a) * u
}

fn diag_populations(eigen: &HermitianEigen, beta: f64) -> Vec<f64> {
    let lo = eigen.values.first().copied().unwrap_or(0.0);
    let weights: Vec<f64> = eigen.values.iter().map(|l| (-beta * (l - lo)).exp()).collect();
    let z: f64 = weights.iter().sum();
    weights.iter().map(|w| w / z).collect()
}

/// `e^{-βH} / Tr e^{-βH}`.
pub fn gibbs_state(h: &ComplexMatrix, beta: f64) -> Result<GibbsState> {
    check_beta(beta)?;
    let eigen = hermitian_eig(h)?;
    let p = diag_populations(&eigen, beta);
    let rho = rho_from(&eigen, &p);
    Ok(GibbsState {
        hamiltonian: h.clone(),
        beta,
        rho,
        rho_eigen: ComplexMatrix::from_diag(&p),
        eigen,
    })
}

fn rho_from(eigen: &HermitianEigen, p: &[f64]) -> ComplexMatrix {
    let u = &eigen.vectors;
    let n = p.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = ZERO;
            for (k, pk) in p.iter().enumerate() {
                acc += u[(r, k)] * u[(c, k)].conj() * *pk;
            }
            out[(r, c)] = acc;
        }
    }
    out
}

impl GibbsState {
    /// A state `Tr(ρ ·)` paired with the flow of `h`, for arbitrary density
    /// matrices. Used for states that need not be KMS.
    pub fn from_density(h: &ComplexMatrix, beta: f64, rho: ComplexMatrix) -> Result<Self> {
        check_beta(beta)?;
        if rho.rows() != h.rows() || !rho.is_square() {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0}", h.rows()),
                actual: format!("{}x{}", rho.rows(), rho.cols()),
            });
        }
        let spec = hermitian_eig(&rho)?;
        if spec.values[0] < -STATE_TOL {
            return Err(Error::InvalidInput(format!("density matrix has eigenvalue {}", spec.values[0])));
        }
        let tr = rho.trace();
        if (tr - 1.0).norm() > STATE_TOL {
            return Err(Error::InvalidInput(format!("density matrix has trace {tr}")));
        }
        let eigen = hermitian_eig(h)?;
        let rho_eigen = in_basis(&eigen.vectors, &rho);
        Ok(Self { hamiltonian: h.clone(), beta, rho, eigen, rho_eigen })
    }

    /// `ρ_A ⊗ ρ_B` for the flow of `H_A ⊗ 1 + 1 ⊗ H_B`, with the product
    /// eigenbasis taken from the factors.
    pub fn product(a: &GibbsState, b: &GibbsState) -> Result<Self> {
        if a.beta != b.beta {
            return Err(Error::InvalidInput(format!("inverse temperatures differ: {} vs {}", a.beta, b.beta)));
        }
        let hamiltonian = kron_sum(&[a.hamiltonian.clone(), b.hamiltonian.clone()])?;
        let rho = kron(&a.rho, &b.rho)?;
        let values = a
            .eigen
            .values
            .iter()
            .flat_map(|x| b.eigen.values.iter().map(move |y| x + y))
            .collect();
        let eigen = HermitianEigen { values, vectors: kron(&a.eigen.vectors, &b.eigen.vectors)? };
        let rho_eigen = kron(&a.rho_eigen, &b.rho_eigen)?;
        Ok(Self { hamiltonian, beta: a.beta, rho, eigen, rho_eigen })
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    /// `Tr(ρ a)`.
    pub fn expectation(&self, a: &ComplexMatrix) -> Complex64 {
        let n = self.dim();
        let mut acc = ZERO;
        for r in 0..n {
            for k in 0..n {
                acc += self.rho[(r, k)] * a[(k, r)];
            }
        }
        acc
    }

    fn check_operator(&self, a: &ComplexMatrix) -> Result<()> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0}", self.dim()),
                actual: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        Ok(())
    }

    /// `F(w) = ω(a φ_w(b))` for complex `w`.
    pub fn two_point(&self, a: &ComplexMatrix, b: &ComplexMatrix, w: Complex64) -> Result<Complex64> {
        self.check_operator(a)?;
        self.check_operator(b)?;
        let u = &self.eigen.vectors;
        let m = &self.rho_eigen * &in_basis(u, a);
        let b = in_basis(u, b);
        let l = &self.eigen.values;
        let n = self.dim();
        let mut acc = ZERO;
        for j in 0..n {
            for k in 0..n {
                let phase = (Complex64::new(0.0, 1.0) * w * (l[k] - l[j])).exp();
                acc += m[(j, k)] * b[(k, j)] * phase;
            }
        }
        Ok(acc)
    }

    /// `|F(t + iβ) - ω(φ_t(b) a)| / (1 + ‖a‖‖b‖)`.
    pub fn kms_residual(&self, a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<f64> {
        let lhs = self.two_point(a, b, Complex64::new(t, self.beta))?;
        let flowed = modular_flow_eigen(&self.eigen, Complex64::new(t, 0.0), b);
        let rhs = self.expectation(&(&flowed * a));
        Ok((lhs - rhs).norm() / (1.0 + spectral_norm(a) * spectral_norm(b)))
    }
}

fn modular_flow_eigen(eigen: &HermitianEigen, w: Complex64, a: &ComplexMatrix) -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    let fwd = eigen.map_spectrum(|l| (i * w * l).exp());
    let back = eigen.map_spectrum(|l| (-i * w * l).exp());
    &(&fwd * a) * &back
}

/// `φ_w(a) = e^{iwH} a e^{-iwH}`.
pub fn modular_flow(h: &ComplexMatrix, w: Complex64, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eigen = hermitian_eig(h)?;
    if a.rows() != h.rows() || a.cols() != h.cols() {
        return Err(Error::ShapeMismatch {
            expected: format!("{0}x{0}", h.rows()),
            actual: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    if w == ZERO {
        return Ok(a.clone());
    }
    Ok(modular_flow_eigen(&eigen, w, a))
}

pub fn kms_residual(state: &GibbsState, a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<f64> {
    state.kms_residual(a, b, t)
}

/// Elementary tensor `a ⊗ b`.
#[derive(Debug, Clone)]
pub struct TensorPair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl TensorPair {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        kron(&self.a, &self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductKmsReport {
    pub max_residual: f64,
    /// `max |ω(a⊗b) - ω_A(a) ω_B(b)|` over every elementary tensor sampled.
    pub max_factorization_error: f64,
}

/// KMS residuals of the product state for the diagonal flow `Φ_{t,t}`,
/// maximized over sample pairs `(x, y)` and times.
pub fn product_kms_residual(
    state_a: &GibbsState,
    state_b: &GibbsState,
    samples: &[(TensorPair, TensorPair)],
    times: &[f64],
) -> Result<ProductKmsReport> {
    let product = GibbsState::product(state_a, state_b)?;
    let mut max_residual = 0.0_f64;
    let mut max_factorization_error = 0.0_f64;
    for (x, y) in samples {
        let (xm, ym) = (x.to_matrix()?, y.to_matrix()?);
        for pair in [x, y] {
            let joint = product.expectation(&pair.to_matrix()?);
            let split = state_a.expectation(&pair.a) * state_b.expectation(&pair.b);
            max_factorization_error = max_factorization_error.max((joint - split).norm());
        }
        for &t in times {
            max_residual = max_residual.max(product.kms_residual(&xm, &ym, t)?);
        }
    }
    Ok(ProductKmsReport { max_residual, max_factorization_error })
}

/// Entries with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexMatrix::new(n, n, data).expect("finite entries")
}

/// `(X + X*)/2` for a [`random_matrix`] `X`.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let x = random_matrix(rng, n);
    (&x + &x.adjoint()).scale_real(0.5)
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateFamily {
    /// Coherent states `|Ω(θ, φ)><Ω(θ, φ)|`.
    Coherent { theta: f64, phi: f64 },
    /// Gibbs states of `Q_J(symbol)` at inverse temperature `beta`.
    Gibbs { symbol: SitePolynomial, beta: f64 },
}

/// Rows `ω_J(Q_J(f))` for one site, keyed by `J`.
pub fn classical_limit_sweep(family: &StateFamily, f: &SitePolynomial, two_j_range: &[u32]) -> Result<SweepReport> {
    check_range(two_j_range)?;
    if f.sites() != 1 {
        return Err(Error::NotSingleSite { sites: f.sites() });
    }
    let mut report = SweepReport::new("J", vec!["value_re".into(), "value_im".into()]);
    for &two_j in two_j_range {
        let q = quantize_site(f, two_j)?;
        let value = match family {
            StateFamily::Coherent { theta, phi } => coherent_state(two_j, *theta, *phi)?.expectation(&q),
            StateFamily::Gibbs { symbol, beta } => {
                let h = quantize_site(symbol, two_j)?;
                gibbs_state(&h, *beta)?.expectation(&q)
            }
        };
        report.push_row(two_j as f64 / 2.0, vec![value.re, value.im])?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::spin::spin_matrices;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn gibbs_examples() {
        let e = 1.7;
        let s = gibbs_state(&ComplexMatrix::from_diag(&[0.0, e]), 1.0).unwrap();
        let z = 1.0 + (-e).exp();
        assert!((s.rho()[(0, 0)].re - 1.0 / z).abs() < 1e-15);
        assert!((s.rho()[(1, 1)].re - (-e).exp() / z).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(&mut rng, 4);
        let hot = gibbs_state(&h, 1e-9).unwrap();
        assert!((hot.rho() - &ComplexMatrix::identity(4).scale_real(0.25)).max_abs() < 1e-6);

        let (h1, h2) = (random_hermitian(&mut rng, 2), random_hermitian(&mut rng, 3));
        let joint = gibbs_state(&kron_sum(&[h1.clone(), h2.clone()]).unwrap(), 0.8).unwrap();
        let split = kron(gibbs_state(&h1, 0.8).unwrap().rho(), gibbs_state(&h2, 0.8).unwrap().rho()).unwrap();
        assert!((joint.rho() - &split).max_abs() < 1e-12);
        assert!(gibbs_state(&h, 0.0).is_err());
        assert!(gibbs_state(&random_matrix(&mut rng, 3), 1.0).is_err());
    }

    #[test]
    fn gibbs_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 5, 9] {
            let s = gibbs_state(&random_hermitian(&mut rng, n), 2.0).unwrap();
            assert!(s.rho().is_hermitian());
            assert!((s.rho().trace() - 1.0).norm() < 1e-12);
            assert!(hermitian_eig(s.rho()).unwrap().values[0] >= -1e-12);
        }
    }

    #[test]
    fn flow_examples() {
        let s = spin_matrices(1).unwrap();
        let a = modular_flow(&s.s_z, ZERO, &s.s_x).unwrap();
        assert_eq!(a, s.s_x);
        for t in [0.3, 1.1, -2.0] {
            let got = modular_flow(&s.s_z, Complex64::new(t, 0.0), &s.s_x).unwrap();
            let expect = &s.s_x.scale_real(t.cos()) - &s.s_y.scale_real(t.sin());
            assert!((&got - &expect).max_abs() < 1e-14);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(&mut rng, 4);
        let x = random_matrix(&mut rng, 4);
        let y = modular_flow(&h, Complex64::new(0.9, 0.0), &x).unwrap();
        assert!((spectral_norm(&y) - spectral_norm(&x)).abs() < 1e-12);
    }

    #[test]
    fn kms_examples() {
        let s = gibbs_state(&ComplexMatrix::from_diag(&[0.0, 1.0]), 1.0).unwrap();
        assert!(s.kms_residual(&sigma_x(), &sigma_x(), 0.3).unwrap() <= 1e-10);
        let id = ComplexMatrix::identity(2);
        assert!(s.kms_residual(&id, &id, 0.7).unwrap() < 1e-15);

        let h = ComplexMatrix::from_diag(&[0.0, 1.0]);
        let mixed = GibbsState::from_density(&h, 1.0, id.scale_real(0.5)).unwrap();
        assert!(mixed.kms_residual(&sigma_x(), &sigma_x(), 0.3).unwrap() > 1e-3);
    }

    #[test]
    fn from_density_validates() {
        let h = ComplexMatrix::from_diag(&[0.0, 1.0]);
        assert!(GibbsState::from_density(&h, 1.0, ComplexMatrix::identity(2)).is_err());
        assert!(GibbsState::from_density(&h, 1.0, ComplexMatrix::from_diag(&[1.5, -0.5])).is_err());
        assert!(GibbsState::from_density(&h, 1.0, ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
    }

    #[test]
    fn two_point_matches_explicit_flow() {
        // Oracle: explicit matrix exponentials.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = random_hermitian(&mut rng, 3);
        let s = gibbs_state(&h, 0.7).unwrap();
        let (a, b) = (random_matrix(&mut rng, 3), random_matrix(&mut rng, 3));
        let w = Complex64::new(0.4, 0.3);
        let flowed = modular_flow(&h, w, &b).unwrap();
        let direct = (s.rho() * &(&a * &flowed)).trace();
        assert!((s.two_point(&a, &b, w).unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn product_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let sa = gibbs_state(&random_hermitian(&mut rng, 2), 1.0).unwrap();
        let sb = gibbs_state(&random_hermitian(&mut rng, 3), 1.0).unwrap();
        let samples: Vec<(TensorPair, TensorPair)> = (0..20)
            .map(|_| {
                let x = TensorPair { a: random_matrix(&mut rng, 2), b: random_matrix(&mut rng, 3) };
                let y = TensorPair { a: random_matrix(&mut rng, 2), b: random_matrix(&mut rng, 3) };
                (x, y)
            })
            .collect();
        let r = product_kms_residual(&sa, &sb, &samples, &[0.0, 0.5, 1.0]).unwrap();
        assert!(r.max_residual <= 1e-9, "{r:?}");
        assert!(r.max_factorization_error <= 1e-12, "{r:?}");

        let unit = (
            TensorPair { a: ComplexMatrix::identity(2), b: ComplexMatrix::identity(3) },
            TensorPair { a: ComplexMatrix::identity(2), b: ComplexMatrix::identity(3) },
        );
        let r = product_kms_residual(&sa, &sb, &[unit], &[0.3]).unwrap();
        assert!(r.max_residual < 1e-15);

        let hot = gibbs_state(&random_hermitian(&mut rng, 3), 2.0).unwrap();
        assert!(product_kms_residual(&sa, &hot, &samples[..0], &[0.0]).is_err());
    }

    #[test]
    fn coherent_limit() {
        let (theta, phi) = (0.9, 2.1);
        let range: Vec<u32> = (1..=12).collect();
        let fam = StateFamily::Coherent { theta, phi };
        let r = classical_limit_sweep(&fam, &parse_poly("z1", 1).unwrap(), &range).unwrap();
        for row in r.rows() {
            let j = row.parameter;
            assert!((row.values[0] - j * theta.cos() / (j + 1.0)).abs() < 1e-10);
            assert!(row.values[1].abs() < 1e-12);
        }
        let r = classical_limit_sweep(&fam, &SitePolynomial::one(1), &range).unwrap();
        assert!(r.column("value_re").unwrap().iter().all(|v| (v - 1.0).abs() < 1e-12));

        let symbol = parse_poly("-(0.5*z1^2 + 0.5*x1)", 1).unwrap();
        let fam = StateFamily::Gibbs { symbol, beta: 2.0 };
        let r = classical_limit_sweep(&fam, &parse_poly("z1", 1).unwrap(), &range).unwrap();
        assert_eq!(r.rows().len(), range.len());
    }
}
