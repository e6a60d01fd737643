//! Ising, Heisenberg and Curie–Weiss models: classical symbols on `(S^2)^d`
//! and the matching quantum Hamiltonians.
//!
//! Chains use open boundary conditions. The Curie–Weiss full Hamiltonian keeps
//! the diagonal `i = j` terms of its double sum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{embed_site, spectral_norm, ComplexMatrix};
use crate::poly::{binomial, Axis, SitePolynomial};
use crate::quant::quantize_site;
use crate::report::SweepReport;
use crate::spin::spin_matrices;
use crate::verify::check_range;

/// Largest site count accepted by [`dicke_symmetrizer`].
pub const MAX_DICKE_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Ising,
    Heisenberg,
    CurieWeiss,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    kind: ModelKind,
    d: usize,
    b: f64,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, d: usize, b: f64) -> Result<Self> {
        let min_sites = if kind == ModelKind::CurieWeiss { 1 } else { 2 };
        if d < min_sites {
            return Err(Error::InvalidInput(format!("{kind:?} needs at least {min_sites} sites, got {d}")));
        }
        if !b.is_finite() {
            return Err(Error::InvalidInput("field strength must be finite".into()));
        }
        if kind == ModelKind::Heisenberg && b != 0.0 {
            return Err(Error::InvalidInput("the Heisenberg model takes no field".into()));
        }
        Ok(Self { kind, d, b })
    }

    pub fn ising(d: usize, b: f64) -> Result<Self> {
        Self::new(ModelKind::Ising, d, b)
    }

    pub fn heisenberg(d: usize) -> Result<Self> {
        Self::new(ModelKind::Heisenberg, d, 0.0)
    }

    pub fn curie_weiss(d: usize, b: f64) -> Result<Self> {
        Self::new(ModelKind::CurieWeiss, d, b)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn sites(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> f64 {
        self.b
    }
}

fn coord(sites: usize, site: usize, axis: Axis) -> SitePolynomial {
    SitePolynomial::coordinate(sites, site, axis)
}

/// The classical Hamiltonian. Curie–Weiss gives the single-site mean-field
/// symbol `-(z^2/2 + B x)`.
pub fn classical_symbol(spec: &ModelSpec) -> SitePolynomial {
    let d = spec.d;
    match spec.kind {
        ModelKind::Ising => {
            let mut h = SitePolynomial::zero(d);
            for j in 0..d - 1 {
                h = &h - &(&coord(d, j, Axis::Z) * &coord(d, j + 1, Axis::Z));
            }
            for j in 0..d {
                h = &h - &coord(d, j, Axis::X).scale_real(spec.b);
            }
            h
        }
        ModelKind::Heisenberg => {
            let mut h = SitePolynomial::zero(d);
            for j in 0..d - 1 {
                for axis in Axis::ALL {
                    h = &h - &(&coord(d, j, axis) * &coord(d, j + 1, axis));
                }
            }
            h
        }
        ModelKind::CurieWeiss => {
            let z = coord(1, 0, Axis::Z);
            let half_z2 = (&z * &z).scale_real(0.5);
            -&(&half_z2 + &coord(1, 0, Axis::X).scale_real(spec.b))
        }
    }
}

/// Spin chain Hamiltonian with every spin operator multiplied by `scale`.
/// `scale = 1/(J+1)` gives exactly `Q^{(d)}` of the classical symbol.
pub fn chain_hamiltonian(spec: &ModelSpec, two_j: u32, scale: f64) -> Result<ComplexMatrix> {
    if spec.kind == ModelKind::CurieWeiss {
        return Err(Error::InvalidInput("chain_hamiltonian covers Ising and Heisenberg only".into()));
    }
    let site_dim = two_j as usize + 1;
    let dims = vec![site_dim; spec.d];
    let total = dims.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n)).unwrap_or(usize::MAX);
    check_dim(total)?;
    let s = spin_matrices(two_j)?;
    let ops: Vec<[ComplexMatrix; 3]> = (0..spec.d)
        .map(|j| {
            Ok([
                embed_site(&s.s_x.scale_real(scale), j, &dims)?,
                embed_site(&s.s_y.scale_real(scale), j, &dims)?,
                embed_site(&s.s_z.scale_real(scale), j, &dims)?,
            ])
        })
        .collect::<Result<_>>()?;
    let mut h = ComplexMatrix::zeros(total, total);
    for j in 0..spec.d - 1 {
        let axes: &[usize] = if spec.kind == ModelKind::Ising { &[2] } else { &[0, 1, 2] };
        for &a in axes {
            h = &h - &(&ops[j][a] * &ops[j + 1][a]);
        }
    }
    if spec.kind == ModelKind::Ising && spec.b != 0.0 {
        for site in &ops {
            h = &h - &site[0].scale_real(spec.b);
        }
    }
    Ok(h)
}

/// The quantum Hamiltonian. Curie–Weiss lives on `d` qubits (`two_j = 1`)
/// with Pauli matrices `σ = 2S`.
pub fn quantum_hamiltonian(spec: &ModelSpec, two_j: u32) -> Result<ComplexMatrix> {
    match spec.kind {
        ModelKind::Ising | ModelKind::Heisenberg => chain_hamiltonian(spec, two_j, 1.0),
        ModelKind::CurieWeiss => {
            if two_j != 1 {
                return Err(Error::InvalidInput(format!(
                    "the Curie-Weiss model is defined on qubits (two_j = 1), got two_j = {two_j}"
                )));
            }
            let d = spec.d;
            let total = 1usize.checked_shl(d as u32).filter(|_| d < usize::BITS as usize).unwrap_or(usize::MAX);
            check_dim(total)?;
            let dims = vec![2; d];
            let s = spin_matrices(1)?;
            let (sigma_x, sigma_z) = (s.s_x.scale_real(2.0), s.s_z.scale_real(2.0));
            let mut mz = ComplexMatrix::zeros(total, total);
            let mut mx = ComplexMatrix::zeros(total, total);
            for j in 0..d {
                mz += &embed_site(&sigma_z, j, &dims)?;
                mx += &embed_site(&sigma_x, j, &dims)?;
            }
            // sum_{i,j} σ3(i) σ3(j) = (sum_j σ3(j))^2
            let pair = (&mz * &mz).scale_real(-1.0 / (2.0 * d as f64));
            Ok(&pair - &mx.scale_real(spec.b))
        }
    }
}

/// Curie–Weiss Hamiltonian on the symmetric subspace of `d` qubits, written
/// with spin-`d/2` operators: `-(2/d) S_z^2 - 2B S_x`.
pub fn cw_restricted(d: usize, b: f64) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::InvalidInput("site count must be positive".into()));
    }
    let two_j = u32::try_from(d).map_err(|_| Error::DimensionCap { dim: d + 1, cap: crate::MAX_DIM })?;
    let s = spin_matrices(two_j)?;
    let sz2 = &s.s_z * &s.s_z;
    Ok(&sz2.scale_real(-2.0 / d as f64) - &s.s_x.scale_real(2.0 * b))
}

/// `‖Q_{d/2}(h_0) - cw_restricted(d, B)/d‖`: per-site energies compared at
/// spin `d/2`.
pub fn cw_defect(d: usize, b: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("cw_defect needs d >= 2, got {d}")));
    }
    let h0 = classical_symbol(&ModelSpec::curie_weiss(1, b)?);
    let q = quantize_site(&h0, d as u32)?;
    let per_site = cw_restricted(d, b)?.scale_real(1.0 / d as f64);
    Ok(spectral_norm(&(&q - &per_site)))
}

/// `cw_defect` over site counts `ds`, keyed by `d`.
pub fn cw_defect_sweep(b: f64, ds: &[u32]) -> Result<SweepReport> {
    check_range(ds)?;
    let mut report = SweepReport::new("d", vec!["cw_defect".into()]);
    for &d in ds {
        report.push_row(d as f64, vec![cw_defect(d as usize, b)?])?;
    }
    Ok(report)
}

/// Isometry `2^d × (d+1)` onto the symmetric subspace. Column `k` is the
/// normalized Dicke state with `k` spins down; site 1 is the most
/// significant bit and bit value 0 is spin up.
pub fn dicke_symmetrizer(d: usize) -> Result<ComplexMatrix> {
    if d == 0 || d > MAX_DICKE_SITES {
        return Err(Error::InvalidInput(format!(
            "dicke_symmetrizer supports 1..={MAX_DICKE_SITES} sites, got {d}"
        )));
    }
    let rows = 1usize << d;
    let mut v = ComplexMatrix::zeros(rows, d + 1);
    for idx in 0..rows {
        let k = idx.count_ones() as usize;
        v[(idx, k)] = Complex64::new(1.0 / binomial(d as u32, k as u32).sqrt(), 0.0);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::poly::parse_poly;
    use crate::quant::quantize_tensor;

    #[test]
    fn symbols() {
        assert_eq!(classical_symbol(&ModelSpec::ising(2, 0.0).unwrap()), parse_poly("-z1*z2", 2).unwrap());
        assert_eq!(
            classical_symbol(&ModelSpec::heisenberg(2).unwrap()),
            parse_poly("-(x1*x2 + y1*y2 + z1*z2)", 2).unwrap()
        );
        assert_eq!(
            classical_symbol(&ModelSpec::curie_weiss(1, 0.0).unwrap()),
            parse_poly("-0.5*(1 - x1^2 - y1^2)", 1).unwrap()
        );
        assert_eq!(
            classical_symbol(&ModelSpec::ising(3, 0.7).unwrap()),
            parse_poly("-z1*z2 - z2*z3 - 0.7*(x1 + x2 + x3)", 3).unwrap()
        );
    }

    #[test]
    fn spec_validation() {
        assert!(ModelSpec::ising(1, 0.0).is_err());
        assert!(ModelSpec::heisenberg(1).is_err());
        assert!(ModelSpec::curie_weiss(0, 0.0).is_err());
        assert!(ModelSpec::curie_weiss(1, f64::NAN).is_err());
    }

    #[test]
    fn ising_two_qubits() {
        let h = quantum_hamiltonian(&ModelSpec::ising(2, 0.0).unwrap(), 1).unwrap();
        let expect = ComplexMatrix::from_diag(&[-0.25, 0.25, 0.25, -0.25]);
        assert!((&h - &expect).max_abs() < 1e-15);
    }

    #[test]
    fn tensor_quantization_reproduces_chains() {
        for two_j in 1..=4u32 {
            for (spec, maxd) in [(ModelSpec::ising(2, 0.3).unwrap(), 3), (ModelSpec::heisenberg(2).unwrap(), 2)] {
                for d in 2..=maxd {
                    let spec = ModelSpec::new(spec.kind(), d, spec.field()).unwrap();
                    let sym = classical_symbol(&spec).scale_coordinates(two_j);
                    let q = quantize_tensor(&sym, two_j).unwrap();
                    let h = quantum_hamiltonian(&spec, two_j).unwrap();
                    assert!((&q - &h).max_abs() < 1e-10, "{spec:?} two_j={two_j}");
                }
            }
        }
    }

    #[test]
    fn cw_restricted_examples() {
        let h = cw_restricted(2, 0.0).unwrap();
        assert!((&h - &ComplexMatrix::from_diag(&[-1.0, 0.0, -1.0])).max_abs() < 1e-15);
        // d = 1: -2 S_z^2 - 2B S_x at spin 1/2 is -1/2 - B σ_x, the full model.
        let b = 0.4;
        let full = quantum_hamiltonian(&ModelSpec::curie_weiss(1, b).unwrap(), 1).unwrap();
        assert!((&cw_restricted(1, b).unwrap() - &full).max_abs() < 1e-15);
        assert!(quantum_hamiltonian(&ModelSpec::curie_weiss(2, b).unwrap(), 2).is_err());
    }

    #[test]
    fn dicke_examples() {
        assert_eq!(dicke_symmetrizer(1).unwrap(), ComplexMatrix::identity(2));
        let v = dicke_symmetrizer(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, h, 0.0],
            vec![0.0, h, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!((&v - &expect).max_abs() < 1e-15);
        assert!(dicke_symmetrizer(13).is_err());
        assert!(dicke_symmetrizer(0).is_err());
    }

    #[test]
    fn dicke_isometry_and_total_spin() {
        for d in 1..=8 {
            let v = dicke_symmetrizer(d).unwrap();
            assert!((&(&v.adjoint() * &v) - &ComplexMatrix::identity(d + 1)).max_abs() < 1e-12);
            let dims = vec![2; d];
            let sigma_z = ComplexMatrix::from_diag(&[1.0, -1.0]);
            let mut total = ComplexMatrix::zeros(1 << d, 1 << d);
            for j in 0..d {
                total += &embed_site(&sigma_z, j, &dims).unwrap();
            }
            let sz = spin_matrices(d as u32).unwrap().s_z.scale_real(2.0);
            assert!((&(&(&v.adjoint() * &total) * &v) - &sz).max_abs() < 1e-12);
        }
    }

    #[test]
    fn symmetrizer_compresses_full_model() {
        for d in 1..=6 {
            let b = 0.5;
            let v = dicke_symmetrizer(d).unwrap();
            let full = quantum_hamiltonian(&ModelSpec::curie_weiss(d, b).unwrap(), 1).unwrap();
            let compressed = &(&v.adjoint() * &full) * &v;
            assert!((&compressed - &cw_restricted(d, b).unwrap()).max_abs() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn cw_defect_halves() {
        let a = cw_defect(10, 0.0).unwrap();
        let b = cw_defect(20, 0.0).unwrap();
        assert!(a.is_finite() && b > 0.0);
        let ratio = a / b;
        assert!(ratio > 1.5 && ratio < 2.5, "ratio {ratio}");
        assert!(cw_defect(1, 0.0).is_err());
    }

    #[test]
    fn kron_helper_agrees() {
        let s = spin_matrices(2).unwrap();
        let h = chain_hamiltonian(&ModelSpec::ising(2, 0.0).unwrap(), 2, 1.0).unwrap();
        assert!((&h + &kron(&s.s_z, &s.s_z).unwrap()).max_abs() < 1e-15);
    }
}
