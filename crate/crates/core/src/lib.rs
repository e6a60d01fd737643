//! Berezin quantization of polynomial observables on products of spheres,
//! with numerical checks of the strict deformation quantization axioms,
//! quenched spin models, KMS states and contour-integral resolvents.

pub mod error;
pub mod kms;
pub mod linalg;
pub mod models;
pub mod poly;
pub mod quant;
pub mod report;
pub mod resolvent;
pub mod spin;
pub mod verify;

pub use error::{Error, Result, MAX_DIM};
pub use linalg::{hermitian_eig, kron, spectral_norm, ComplexMatrix, HermitianEigen};
pub use poly::{parse_poly, poisson_bracket_single, poisson_bracket_tensor, sup_norm, SitePolynomial};
pub use quant::{build_grid, quantize_site, quantize_tensor, QuadratureGrid};
pub use spin::{coherent_state, spin_matrices, CoherentState, SpinRepresentation};
pub use models::{classical_symbol, cw_defect, cw_defect_sweep, cw_restricted, dicke_symmetrizer, quantum_hamiltonian, ModelKind, ModelSpec};
pub use report::{fit_rate, RateFit, SweepReport};
pub use verify::{axiom_check, dgr_defect, hamiltonian_norm_limit, norm_gap, product_defect, sweep, Observable};
pub use kms::{gibbs_state, kms_residual, modular_flow, product_kms_residual, GibbsState};
pub use resolvent::{build_contour, resolvent_error, resolvent_sum, ContourSpec};
