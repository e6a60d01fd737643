#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use sdq_core::linalg::ComplexMatrix;
use sdq_core::poly::{AmbientPolynomial, Monomial, SitePolynomial};

pub fn coeff() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

pub fn real_coeff() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64).prop_map(|re| Complex64::new(re, 0.0))
}

/// Exponent triple with total degree at most `deg`.
fn site_exponents(deg: u32) -> impl Strategy<Value = [u32; 3]> {
    (0..=deg, 0..=deg, 0..=deg).prop_filter_map("degree bound", move |(a, b, c)| {
        (a + b + c <= deg).then_some([a, b, c])
    })
}

pub fn monomial(sites: usize, deg: u32) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(site_exponents(deg), sites).prop_map(Monomial::from_exponents)
}

/// Ambient representatives with per-site degree `<= deg`, up to 5 terms.
pub fn ambient(sites: usize, deg: u32, c: BoxedStrategy<Complex64>) -> impl Strategy<Value = AmbientPolynomial> {
    proptest::collection::vec((monomial(sites, deg), c), 1..=5)
        .prop_map(move |terms| AmbientPolynomial::from_terms(sites, terms).unwrap())
}

pub fn poly(sites: usize, deg: u32) -> impl Strategy<Value = SitePolynomial> {
    ambient(sites, deg, coeff().boxed()).prop_map(|a| a.reduce())
}

pub fn real_poly(sites: usize, deg: u32) -> impl Strategy<Value = SitePolynomial> {
    ambient(sites, deg, real_coeff().boxed()).prop_map(|a| a.reduce())
}

pub fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(coeff(), n * n).prop_map(move |data| {
        let x = ComplexMatrix::new(n, n, data).unwrap();
        (&x + &x.adjoint()).scale_real(0.5)
    })
}

pub fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(coeff(), n * n).prop_map(move |data| ComplexMatrix::new(n, n, data).unwrap())
}
