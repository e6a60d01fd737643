//! Berezin quantization on the sphere and its tensor powers.
//!
//! `Q_J(P) = (2J+1)/(4π) ∫ P(Ω) |Ω><Ω| dμ(Ω)`, evaluated with a product rule
//! (Gauss–Legendre in `t = cos θ`, uniform in `φ`) that is exact for
//! polynomial symbols. The `φ` sum is folded into Fourier coefficients of the
//! symbol on each `θ` ring, since projector entries `(k, l)` only carry the
//! phase `e^{i(k-l)φ}`.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{kron_all, ComplexMatrix, ZERO};
use crate::poly::{Monomial, SitePolynomial};
use crate::spin::coherent_magnitudes;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
            x = 0.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Product quadrature on the sphere.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    /// Gauss–Legendre nodes in `t = cos θ`.
    pub t_nodes: Vec<f64>,
    pub t_weights: Vec<f64>,
    /// Integrands that are polynomials of this degree in `t` times
    /// trigonometric polynomials of this order in `φ` are integrated exactly.
    pub exact_degree: usize,
}

impl QuadratureGrid {
    pub fn phi_weight(&self) -> f64 {
        TAU / self.n_phi as f64
    }

    pub fn phi(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n_phi as f64
    }

    pub fn total_weight(&self) -> f64 {
        self.t_weights.iter().sum::<f64>() * self.phi_weight() * self.n_phi as f64
    }

    /// `∫ f dμ` over the sphere, `f` given in `(θ, φ)`.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> Complex64) -> Complex64 {
        let mut acc = ZERO;
        for (t, w) in self.t_nodes.iter().zip(&self.t_weights) {
            let theta = t.acos();
            let mut ring = ZERO;
            for k in 0..self.n_phi {
                ring += f(theta, self.phi(k));
            }
            acc += ring * (w * self.phi_weight());
        }
        acc
    }

    /// Doubled resolution in both directions.
    pub fn refined(&self) -> Self {
        Self::with_counts(2 * self.n_theta, 2 * self.n_phi)
    }

    pub fn with_counts(n_theta: usize, n_phi: usize) -> Self {
        let (t_nodes, t_weights) = gauss_legendre(n_theta);
        Self { n_theta, n_phi, t_nodes, t_weights, exact_degree: (2 * n_theta - 1).min(n_phi - 1) }
    }
}

/// Grid that integrates the Berezin integrand for spin `two_j / 2` and
/// single-site symbols of degree `poly_degree` exactly.
pub fn build_grid(two_j: u32, poly_degree: u32) -> QuadratureGrid {
    let k = (two_j + poly_degree) as usize;
    QuadratureGrid::with_counts(k + 2, 2 * k + 3)
}

fn site_symbol(p: &SitePolynomial) -> Result<()> {
    if p.sites() != 1 {
        return Err(Error::NotSingleSite { sites: p.sites() });
    }
    Ok(())
}

/// Berezin quantization of a one-site polynomial on a given grid.
pub fn quantize_site_on(p: &SitePolynomial, two_j: u32, grid: &QuadratureGrid) -> Result<ComplexMatrix> {
    site_symbol(p)?;
    if two_j == 0 {
        return Err(Error::InvalidInput("two_j must be at least 1".into()));
    }
    let dim = two_j as usize + 1;
    check_dim(dim)?;
    let n_phi = grid.n_phi;
    // Conjugate-symmetric root table, so Q(conj P) is bitwise Q(P)*.
    let mut roots = vec![Complex64::new(1.0, 0.0); n_phi];
    for r in 1..=n_phi / 2 {
        roots[r] = Complex64::from_polar(1.0, grid.phi(r));
        roots[n_phi - r] = roots[r].conj();
    }
    if n_phi.is_multiple_of(2) {
        roots[n_phi / 2] = Complex64::new(-1.0, 0.0);
    }
    let max_freq = two_j as usize;
    let prefactor = dim as f64 / (4.0 * PI);
    let mut q = ComplexMatrix::zeros(dim, dim);
    let mut ring = vec![ZERO; n_phi];
    // fourier[max_freq + n] = sum_m w_φ P(θ, φ_m) e^{i n φ_m}
    let mut fourier = vec![ZERO; 2 * max_freq + 1];

    for (t, w) in grid.t_nodes.iter().zip(&grid.t_weights) {
        let theta = t.acos();
        let sin_t = (1.0 - t * t).max(0.0).sqrt();
        for (m, slot) in ring.iter_mut().enumerate() {
            let phi = grid.phi(m);
            *slot = p.evaluate_cartesian(&[[sin_t * phi.cos(), sin_t * phi.sin(), *t]]);
        }
        for (idx, f) in fourier.iter_mut().enumerate() {
            let n = idx as i64 - max_freq as i64;
            let mut acc = ZERO;
            for (m, v) in ring.iter().enumerate() {
                let r = (n * m as i64).rem_euclid(n_phi as i64) as usize;
                acc += v * roots[r];
            }
            *f = acc * grid.phi_weight();
        }
        let mags = coherent_magnitudes(two_j, theta);
        let scale = prefactor * w;
        for k in 0..dim {
            for l in 0..dim {
                let n = k as i64 - l as i64;
                let f = fourier[(max_freq as i64 + n) as usize];
                q[(k, l)] += f * (scale * (mags[k] * mags[l]));
            }
        }
    }
    Ok(q)
}

/// `Q_J(P)` for a one-site polynomial.
pub fn quantize_site(p: &SitePolynomial, two_j: u32) -> Result<ComplexMatrix> {
    let grid = build_grid(two_j, p.total_degree());
    quantize_site_on(p, two_j, &grid)
}

/// `Q^{(d)}(P)`, extended linearly from `Q(f_1) ⊗ ... ⊗ Q(f_d)` on monomials.
pub fn quantize_tensor(p: &SitePolynomial, two_j: u32) -> Result<ComplexMatrix> {
    let d = p.sites();
    if two_j == 0 {
        return Err(Error::InvalidInput("two_j must be at least 1".into()));
    }
    let site_dim = two_j as usize + 1;
    let dim = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(site_dim)).unwrap_or(usize::MAX);
    check_dim(dim)?;
    if d == 1 {
        return quantize_site(p, two_j);
    }
    let grid = build_grid(two_j, p.max_site_degree());
    let mut cache: HashMap<[u32; 3], ComplexMatrix> = HashMap::new();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (m, c) in p.terms() {
        let mut factors = Vec::with_capacity(d);
        for j in 0..d {
            let e = m.site(j);
            if let std::collections::hash_map::Entry::Vacant(slot) = cache.entry(e) {
                let mono = SitePolynomial::from_terms(1, [(Monomial::from_exponents(vec![e]), Complex64::new(1.0, 0.0))])?;
                slot.insert(quantize_site_on(&mono, two_j, &grid)?);
            }
            factors.push(cache[&e].clone());
        }
        out += &kron_all(&factors)?.scale(*c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::spin::{coherent_projector, coherent_state, spin_matrices};

    /// Oracle: the unfactored projector sum over every grid node.
    fn direct_sum(p: &SitePolynomial, two_j: u32, grid: &QuadratureGrid) -> ComplexMatrix {
        let dim = two_j as usize + 1;
        let mut q = ComplexMatrix::zeros(dim, dim);
        for (t, w) in grid.t_nodes.iter().zip(&grid.t_weights) {
            let theta = t.acos();
            for k in 0..grid.n_phi {
                let phi = grid.phi(k);
                let v = p.evaluate(&[(theta, phi)]).unwrap();
                let proj = coherent_projector(&coherent_state(two_j, theta, phi).unwrap());
                q += &proj.scale(v * (w * grid.phi_weight()));
            }
        }
        q.scale_real(dim as f64 / (4.0 * PI))
    }

    fn p(s: &str) -> SitePolynomial {
        parse_poly(s, 1).unwrap()
    }

    #[test]
    fn gauss_legendre_moments() {
        for n in 1..=30 {
            let (x, w) = gauss_legendre(n);
            for k in 0..(2 * n) {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                assert!((got - exact).abs() < 1e-13, "n={n} k={k} got={got}");
            }
        }
    }

    #[test]
    fn grid_examples() {
        let g = build_grid(3, 2);
        assert!(g.n_theta >= 3 + 2 + 2 && g.n_phi >= 2 * 5 + 3);
        assert!((g.total_weight() - 4.0 * PI).abs() < 1e-12);
        let g = build_grid(2, 1);
        let v = g.integrate(|t, _| Complex64::new(t.cos(), 0.0));
        assert!(v.norm() < 1e-13);
        let v = g.integrate(|_, _| Complex64::new(1.0, 0.0));
        assert!((v.re - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn factored_sum_matches_direct_sum() {
        for (s, two_j) in [("z1", 1), ("x1*y1 + (1 + 2*i)*z1", 3), ("x1^3 - y1^2*z1 + 0.5", 4)] {
            let poly = p(s);
            let grid = build_grid(two_j, poly.total_degree());
            let a = quantize_site_on(&poly, two_j, &grid).unwrap();
            let b = direct_sum(&poly, two_j, &grid);
            assert!((&a - &b).max_abs() < 1e-13, "{s}");
        }
    }

    #[test]
    fn spin_half_by_hand() {
        let q = quantize_site(&p("z1"), 1).unwrap();
        let expect = ComplexMatrix::from_diag(&[1.0 / 3.0, -1.0 / 3.0]);
        assert!((&q - &expect).max_abs() < 1e-14);
        let q = quantize_site(&p("z1^2"), 1).unwrap();
        assert!((&q - &ComplexMatrix::identity(2).scale_real(1.0 / 3.0)).max_abs() < 1e-14);
    }

    #[test]
    fn scaled_z_is_s_z() {
        for two_j in 1..=6 {
            let j1 = two_j as f64 / 2.0 + 1.0;
            let q = quantize_site(&p("z1").scale_real(j1), two_j).unwrap();
            assert!((&q - &spin_matrices(two_j).unwrap().s_z).max_abs() < 1e-10);
        }
    }

    #[test]
    fn unit_and_grid_doubling() {
        for two_j in [1, 2, 5, 11] {
            let one = quantize_site(&SitePolynomial::one(1), two_j).unwrap();
            assert!((&one - &ComplexMatrix::identity(two_j as usize + 1)).max_abs() < 1e-12);
            let poly = p("x1^2*y1 - 3*z1 + x1*y1*z1");
            let grid = build_grid(two_j, poly.total_degree());
            let a = quantize_site_on(&poly, two_j, &grid).unwrap();
            let b = quantize_site_on(&poly, two_j, &grid.refined()).unwrap();
            assert!((&a - &b).max_abs() < 1e-13);
        }
    }

    #[test]
    fn tensor_examples() {
        let one = quantize_tensor(&SitePolynomial::one(2), 2).unwrap();
        assert!((&one - &ComplexMatrix::identity(9)).max_abs() < 1e-12);
        for two_j in 1..=4 {
            let j1 = two_j as f64 / 2.0 + 1.0;
            let q = quantize_tensor(&parse_poly("z1*z2", 2).unwrap().scale_real(j1 * j1), two_j).unwrap();
            let sz = spin_matrices(two_j).unwrap().s_z;
            let expect = crate::linalg::kron(&sz, &sz).unwrap();
            assert!((&q - &expect).max_abs() < 1e-10);
        }
        assert!(matches!(
            quantize_tensor(&parse_poly("x1", 4).unwrap(), 15),
            Err(Error::DimensionCap { .. })
        ));
        assert!(quantize_site(&parse_poly("x1", 2).unwrap(), 1).is_err());
    }
}
