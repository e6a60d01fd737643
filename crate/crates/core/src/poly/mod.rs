//! Polynomials on a product of unit 2-spheres.
//!
//! A [`SitePolynomial`] lives on `d` sites, each carrying ambient coordinates
//! `(x_j, y_j, z_j)`. It is always kept in normal form modulo the sphere
//! relations: every stored monomial has z-degree at most one per site, with
//! `z_j^2` rewritten as `1 - x_j^2 - y_j^2`. [`AmbientPolynomial`] is the
//! unreduced counterpart used for representatives in `R^3`.

mod bracket;
mod parse;
mod supnorm;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use bracket::{ambient_bracket, poisson_bracket_single, poisson_bracket_tensor};
pub use parse::{parse_poly, ParseError, MAX_EXPONENT};
pub use supnorm::{sup_norm, MAX_SUP_NORM_SITES};

/// Coefficient-equality tolerance.
pub const COEFF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }
}

/// Per-site exponent triples `(a_j, b_j, c_j)` for `x_j^a y_j^b z_j^c`.
///
/// The derived ordering (site-major, then lexicographic in `(a, b, c)`) is the
/// printing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<[u32; 3]>);

impl Monomial {
    pub fn one(sites: usize) -> Self {
        Self(vec![[0; 3]; sites])
    }

    pub fn from_exponents(exps: Vec<[u32; 3]>) -> Self {
        Self(exps)
    }

    pub fn coordinate(sites: usize, site: usize, axis: Axis) -> Self {
        let mut m = Self::one(sites);
        m.0[site][axis.index()] = 1;
        m
    }

    pub fn sites(&self) -> usize {
        self.0.len()
    }

    pub fn site(&self, j: usize) -> [u32; 3] {
        self.0[j]
    }

    pub fn exponents(&self) -> &[[u32; 3]] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|e| *e == [0; 3])
    }

    pub fn site_degree(&self, j: usize) -> u32 {
        self.0[j].iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        (0..self.sites()).map(|j| self.site_degree(j)).sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|e| e[2] <= 1)
    }

    fn times(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| [a[0] + b[0], a[1] + b[1], a[2] + b[2]])
                .collect(),
        )
    }

    /// Value at per-site Cartesian points.
    pub fn eval_cartesian(&self, points: &[[f64; 3]]) -> f64 {
        self.0
            .iter()
            .zip(points)
            .map(|(e, p)| {
                p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32)
            })
            .product()
    }
}

type Terms = BTreeMap<Monomial, Complex64>;

fn accumulate(terms: &mut Terms, mono: Monomial, coeff: Complex64) {
    if coeff == Complex64::new(0.0, 0.0) {
        return;
    }
    let entry = terms.entry(mono);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = *o.get() + coeff;
            if sum == Complex64::new(0.0, 0.0) {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// A polynomial in the ambient coordinates with no sphere relation applied.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientPolynomial {
    sites: usize,
    terms: Terms,
}

impl AmbientPolynomial {
    pub fn zero(sites: usize) -> Self {
        Self { sites, terms: Terms::new() }
    }

    pub fn from_terms(sites: usize, terms: impl IntoIterator<Item = (Monomial, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(sites);
        for (m, c) in terms {
            if m.sites() != sites {
                return Err(Error::SitesMismatch { left: sites, right: m.sites() });
            }
            accumulate(&mut p.terms, m, c);
        }
        Ok(p)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_sites(&self, other: &Self) -> Result<()> {
        if self.sites != other.sites {
            return Err(Error::SitesMismatch { left: self.sites, right: other.sites });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_sites(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), *c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_sites(other)?;
        let mut out = Self::zero(self.sites);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(&mut out.terms, ma.times(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.sites);
        for (m, c) in &self.terms {
            accumulate(&mut out.terms, m.clone(), c * s);
        }
        out
    }

    /// Partial derivative with respect to one ambient coordinate.
    pub fn partial(&self, site: usize, axis: Axis) -> Self {
        let k = axis.index();
        let mut out = Self::zero(self.sites);
        for (m, c) in &self.terms {
            let e = m.0[site][k];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[site][k] -= 1;
            accumulate(&mut out.terms, dm, c * e as f64);
        }
        out
    }

    /// The single coordinate `x_j`, `y_j` or `z_j` (site index 0-based).
    pub fn coordinate(sites: usize, site: usize, axis: Axis) -> Self {
        Self::from_terms(sites, [(Monomial::coordinate(sites, site, axis), Complex64::new(1.0, 0.0))])
            .expect("matching sites")
    }

    /// `x_j^2 + y_j^2 + z_j^2 - 1`, the generator of the sphere ideal at one site.
    pub fn sphere_relation(sites: usize, site: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let mut terms = vec![(Monomial::one(sites), -one)];
        for axis in Axis::ALL {
            let mut m = Monomial::one(sites);
            m.0[site][axis.index()] = 2;
            terms.push((m, one));
        }
        Self::from_terms(sites, terms).expect("matching sites")
    }

    /// Rewrites into normal form.
    pub fn reduce(&self) -> SitePolynomial {
        let mut out = Terms::new();
        for (m, c) in &self.terms {
            for (rm, rc) in reduce_monomial(m) {
                accumulate(&mut out, rm, c * rc);
            }
        }
        SitePolynomial { sites: self.sites, terms: out }
    }
}

/// Expands `z^c` with `c >= 2` through `z^2 = 1 - x^2 - y^2`, site by site.
fn reduce_monomial(m: &Monomial) -> Vec<(Monomial, f64)> {
    if m.is_reduced() {
        return vec![(m.clone(), 1.0)];
    }
    let mut acc: Vec<(Vec<[u32; 3]>, f64)> = vec![(Vec::with_capacity(m.sites()), 1.0)];
    for &[a, b, c] in &m.0 {
        let site_terms: Vec<([u32; 3], f64)> = if c <= 1 {
            vec![([a, b, c], 1.0)]
        } else {
            let k = c / 2;
            let r = c % 2;
            // (1 - x^2 - y^2)^k = sum over i + j + l = k of
            // k!/(i! j! l!) (-1)^(j+l) x^(2j) y^(2l)
            let mut v = Vec::new();
            for j in 0..=k {
                for l in 0..=(k - j) {
                    let i = k - j - l;
                    let coeff = multinomial(k, &[i, j, l]) * if (j + l) % 2 == 0 { 1.0 } else { -1.0 };
                    v.push(([a + 2 * j, b + 2 * l, r], coeff));
                }
            }
            v
        };
        let mut next = Vec::with_capacity(acc.len() * site_terms.len());
        for (prefix, pc) in &acc {
            for (e, sc) in &site_terms {
                let mut p = prefix.clone();
                p.push(*e);
                next.push((p, pc * sc));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(e, c)| (Monomial(e), c)).collect()
}

fn multinomial(n: u32, parts: &[u32]) -> f64 {
    // Built as a product of binomials to stay exact for the exponents we allow.
    let mut result = 1.0;
    let mut remaining = n;
    for &p in parts {
        result *= binomial(remaining, p);
        remaining -= p;
    }
    result
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut r = 1.0_f64;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

/// A normal-form polynomial on `sites` unit spheres.
#[derive(Debug, Clone)]
pub struct SitePolynomial {
    sites: usize,
    terms: Terms,
}

impl SitePolynomial {
    pub fn zero(sites: usize) -> Self {
        assert!(sites >= 1, "a polynomial needs at least one site");
        Self { sites, terms: Terms::new() }
    }

    pub fn constant(sites: usize, c: Complex64) -> Self {
        let mut p = Self::zero(sites);
        accumulate(&mut p.terms, Monomial::one(sites), c);
        p
    }

    pub fn one(sites: usize) -> Self {
        Self::constant(sites, Complex64::new(1.0, 0.0))
    }

    /// Coordinate function on a 0-based site.
    pub fn coordinate(sites: usize, site: usize, axis: Axis) -> Self {
        AmbientPolynomial::coordinate(sites, site, axis).reduce()
    }

    pub fn from_terms(sites: usize, terms: impl IntoIterator<Item = (Monomial, Complex64)>) -> Result<Self> {
        Ok(AmbientPolynomial::from_terms(sites, terms)?.reduce())
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn to_ambient(&self) -> AmbientPolynomial {
        AmbientPolynomial { sites: self.sites, terms: self.terms.clone() }
    }

    /// Largest total degree of any term.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Largest per-site degree of any term at any site.
    pub fn max_site_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| (0..m.sites()).map(move |j| m.site_degree(j)))
            .max()
            .unwrap_or(0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(self.to_ambient().try_add(&other.to_ambient())?.reduce())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(self.to_ambient().try_mul(&other.to_ambient())?.reduce())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.to_ambient().scale(s).reduce()
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Coefficient-wise complex conjugate, i.e. the pointwise `f*`.
    pub fn conj(&self) -> Self {
        Self {
            sites: self.sites,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    /// Equality of normal forms within an absolute coefficient tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sites == other.sites && self.max_coeff_diff(other) <= tol
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.coefficient(m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// Value at per-site spherical angles `(theta_j, phi_j)`.
    pub fn evaluate(&self, angles: &[(f64, f64)]) -> Result<Complex64> {
        if angles.len() != self.sites {
            return Err(Error::InvalidInput(format!(
                "expected {} angle pairs, got {}",
                self.sites,
                angles.len()
            )));
        }
        let points: Vec<[f64; 3]> = angles.iter().map(|&(t, p)| cartesian(t, p)).collect();
        Ok(self.evaluate_cartesian(&points))
    }

    pub fn evaluate_cartesian(&self, points: &[[f64; 3]]) -> Complex64 {
        self.terms.iter().map(|(m, c)| c * m.eval_cartesian(points)).sum()
    }

    /// Substitutes `e_j -> (J+1) e_j` on every site: each monomial gains
    /// `prod_j (J+1)^{deg_j}`.
    pub fn scale_coordinates(&self, two_j: u32) -> Self {
        let factor = two_j as f64 / 2.0 + 1.0;
        Self {
            sites: self.sites,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor.powi(m.total_degree() as i32)))
                .collect(),
        }
    }
}

pub fn poly_mul(p: &SitePolynomial, q: &SitePolynomial) -> Result<SitePolynomial> {
    p.try_mul(q)
}

pub(crate) fn cartesian(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

impl PartialEq for SitePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, COEFF_TOL)
    }
}

impl Add for &SitePolynomial {
    type Output = SitePolynomial;
    fn add(self, rhs: &SitePolynomial) -> SitePolynomial {
        self.try_add(rhs).expect("site count mismatch")
    }
}

impl Sub for &SitePolynomial {
    type Output = SitePolynomial;
    fn sub(self, rhs: &SitePolynomial) -> SitePolynomial {
        self.try_sub(rhs).expect("site count mismatch")
    }
}

impl Mul for &SitePolynomial {
    type Output = SitePolynomial;
    fn mul(self, rhs: &SitePolynomial) -> SitePolynomial {
        self.try_mul(rhs).expect("site count mismatch")
    }
}

impl Neg for &SitePolynomial {
    type Output = SitePolynomial;
    fn neg(self) -> SitePolynomial {
        self.scale_real(-1.0)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (j, e) in m.0.iter().enumerate() {
        for axis in Axis::ALL {
            let k = e[axis.index()];
            if k == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{}{}", axis.letter(), j + 1)?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
    }
    Ok(())
}

/// Shortest round-trip digits; `{:?}` switches to exponent form at the extremes.
fn number(x: f64) -> String {
    let s = format!("{x:?}");
    s.strip_suffix(".0").map(str::to_owned).unwrap_or(s)
}

impl fmt::Display for SitePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let constant = m.is_constant();
            // Real and purely imaginary coefficients print as signed
            // magnitudes, the latter with a factor `i`.
            let imaginary = c.re == 0.0 && c.im != 0.0;
            if c.im == 0.0 || imaginary {
                let value = if imaginary { c.im } else { c.re };
                match (idx == 0, value.is_sign_negative()) {
                    (true, true) => f.write_str("-")?,
                    (true, false) => {}
                    (false, true) => f.write_str(" - ")?,
                    (false, false) => f.write_str(" + ")?,
                }
                let mag = value.abs();
                let mut factors: Vec<String> = Vec::new();
                if mag != 1.0 || (constant && !imaginary) {
                    factors.push(number(mag));
                }
                if imaginary {
                    factors.push("i".into());
                }
                f.write_str(&factors.join("*"))?;
                if !constant {
                    if !factors.is_empty() {
                        f.write_str("*")?;
                    }
                    write_monomial(f, m)?;
                }
            } else {
                if idx > 0 {
                    f.write_str(" + ")?;
                }
                let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                write!(f, "({} {} {}*i)", number(c.re), sign, number(c.im.abs()))?;
                if !constant {
                    f.write_str("*")?;
                    write_monomial(f, m)?;
                }
            }
        }
        Ok(())
    }
}
