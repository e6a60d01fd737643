//! Numerical checks of the quantization axioms: unit and adjoint
//! preservation, norm gaps, Dirac–Groenewold–Rieffel and product defects, and
//! sweeps of these over the spin.
//!
//! The semiclassical parameter is `ħ = 1/J`, and the commutator enters as
//! `(1/(iħ))[Q(f), Q(g)]`. All defects are operator norms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, ComplexMatrix};
use crate::models::{chain_hamiltonian, classical_symbol, cw_restricted, ModelKind, ModelSpec};
use crate::poly::{sup_norm, SitePolynomial};
use crate::quant::quantize_tensor;
use crate::report::SweepReport;

pub const AXIOM_TOL: f64 = 1e-12;

fn same_sites(f: &SitePolynomial, g: &SitePolynomial) -> Result<()> {
    if f.sites() != g.sites() {
        return Err(Error::SitesMismatch { left: f.sites(), right: g.sites() });
    }
    Ok(())
}

/// `‖(1/(iħ))[Q(f), Q(g)] - Q({f, g})‖` with `ħ = 1/J`.
pub fn dgr_defect(f: &SitePolynomial, g: &SitePolynomial, two_j: u32) -> Result<f64> {
    same_sites(f, g)?;
    let j = two_j as f64 / 2.0;
    let qf = quantize_tensor(f, two_j)?;
    let qg = quantize_tensor(g, two_j)?;
    let lhs = qf.commutator(&qg)?.scale(Complex64::new(0.0, -j));
    let rhs = quantize_tensor(&f.bracket(g)?, two_j)?;
    Ok(spectral_norm(&(&lhs - &rhs)))
}

/// `‖Q(f)Q(g) - Q(fg)‖`.
pub fn product_defect(f: &SitePolynomial, g: &SitePolynomial, two_j: u32) -> Result<f64> {
    same_sites(f, g)?;
    let qf = quantize_tensor(f, two_j)?;
    let qg = quantize_tensor(g, two_j)?;
    let qfg = quantize_tensor(&f.try_mul(g)?, two_j)?;
    Ok(spectral_norm(&(&(&qf * &qg) - &qfg)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormGap {
    pub quantum_norm: f64,
    pub classical_norm: f64,
    pub gap: f64,
}

pub fn norm_gap(f: &SitePolynomial, two_j: u32) -> Result<NormGap> {
    let quantum_norm = spectral_norm(&quantize_tensor(f, two_j)?);
    let classical_norm = sup_norm(f)?;
    Ok(NormGap { quantum_norm, classical_norm, gap: (quantum_norm - classical_norm).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// `max |Q(1) - I|`.
    pub unit_residual: f64,
    /// `max |Q(conj f) - Q(f)*|`.
    pub adjoint_residual: f64,
    pub unit_ok: bool,
    pub adjoint_ok: bool,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.unit_ok && self.adjoint_ok
    }
}

pub fn axiom_check(f: &SitePolynomial, two_j: u32) -> Result<AxiomReport> {
    let one = quantize_tensor(&SitePolynomial::one(f.sites()), two_j)?;
    let unit_residual = (&one - &ComplexMatrix::identity(one.rows())).max_abs();
    let q = quantize_tensor(f, two_j)?;
    let q_conj = quantize_tensor(&f.conj(), two_j)?;
    let adjoint_residual = (&q_conj - &q.adjoint()).max_abs();
    Ok(AxiomReport {
        unit_residual,
        adjoint_residual,
        unit_ok: unit_residual <= AXIOM_TOL,
        adjoint_ok: adjoint_residual <= AXIOM_TOL,
    })
}

/// A defect-type observable evaluated once per spin.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    Dgr { f: SitePolynomial, g: SitePolynomial },
    Product { f: SitePolynomial, g: SitePolynomial },
    NormGap { f: SitePolynomial },
}

impl Observable {
    pub fn columns(&self) -> Vec<String> {
        let names: &[&str] = match self {
            Observable::Dgr { .. } => &["dgr_defect"],
            Observable::Product { .. } => &["product_defect"],
            Observable::NormGap { .. } => &["quantum_norm", "classical_norm", "gap"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }

    pub fn evaluate(&self, two_j: u32) -> Result<Vec<f64>> {
        Ok(match self {
            Observable::Dgr { f, g } => vec![dgr_defect(f, g, two_j)?],
            Observable::Product { f, g } => vec![product_defect(f, g, two_j)?],
            Observable::NormGap { f } => {
                let n = norm_gap(f, two_j)?;
                vec![n.quantum_norm, n.classical_norm, n.gap]
            }
        })
    }
}

pub(crate) fn check_range(two_j_range: &[u32]) -> Result<()> {
    if two_j_range.is_empty() {
        return Err(Error::InvalidInput("sweep range is empty".into()));
    }
    if two_j_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("sweep range must be strictly ascending".into()));
    }
    Ok(())
}

/// One row per `two_j`, keyed by `J = two_j / 2`.
pub fn sweep(observable: &Observable, two_j_range: &[u32]) -> Result<SweepReport> {
    check_range(two_j_range)?;
    let mut report = SweepReport::new("J", observable.columns());
    for &two_j in two_j_range {
        report.push_row(two_j as f64 / 2.0, observable.evaluate(two_j)?)?;
    }
    Ok(report)
}

/// Norms of rescaled Hamiltonians against the sup norm of their symbols.
///
/// Ising and Heisenberg rows are keyed by `J`, with every spin operator
/// divided by `J + 1`. Curie–Weiss rows are keyed by the site count `d`
/// (the entries of `range`), using the per-site restricted Hamiltonian
/// `cw_restricted(d, B)/d`; the `d` of `model` is ignored there.
pub fn hamiltonian_norm_limit(model: &ModelSpec, range: &[u32]) -> Result<SweepReport> {
    check_range(range)?;
    let columns = ["quantum_norm", "classical_norm", "gap"].map(String::from).to_vec();
    let symbol = classical_symbol(model);
    let classical = sup_norm(&symbol)?;
    match model.kind() {
        ModelKind::CurieWeiss => {
            let mut report = SweepReport::new("d", columns);
            for &d in range {
                let d = d as usize;
                let h = cw_restricted(d, model.field())?.scale_real(1.0 / d as f64);
                let q = spectral_norm(&h);
                report.push_row(d as f64, vec![q, classical, (q - classical).abs()])?;
            }
            Ok(report)
        }
        _ => {
            let mut report = SweepReport::new("J", columns);
            for &two_j in range {
                let j = two_j as f64 / 2.0;
                let h = chain_hamiltonian(model, two_j, 1.0 / (j + 1.0))?;
                let q = spectral_norm(&h);
                report.push_row(j, vec![q, classical, (q - classical).abs()])?;
            }
            Ok(report)
        }
    }
}
