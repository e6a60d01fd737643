//! Poisson brackets on products of spheres.
//!
//! On one sphere `{f, g} = sum_{abc} eps_{abc} x_c (d_a f)(d_b g)`. On `d`
//! sites the tensor bracket is the sum of single-site brackets, each acting on
//! its own site's coordinates with the others held fixed; for elementary
//! tensors this is `{f1,g1} ⊗ f2 g2 + f1 g1 ⊗ {f2,g2}`.
//!
//! The bracket is computed on ambient representatives and then reduced.

use num_complex::Complex64;

use super::{AmbientPolynomial, Axis, SitePolynomial};
use crate::error::{Error, Result};

/// Levi-Civita cyclic triples `(a, b, c)` with `eps_{abc} = +1`.
const CYCLIC: [(Axis, Axis, Axis); 3] = [
    (Axis::X, Axis::Y, Axis::Z),
    (Axis::Y, Axis::Z, Axis::X),
    (Axis::Z, Axis::X, Axis::Y),
];

fn site_bracket(f: &AmbientPolynomial, g: &AmbientPolynomial, site: usize) -> Result<AmbientPolynomial> {
    let sites = f.sites();
    let mut out = AmbientPolynomial::zero(sites);
    for (a, b, c) in CYCLIC {
        // eps_{abc} = +1 and eps_{bac} = -1 share the factor x_c.
        let fa_gb = f.partial(site, a).try_mul(&g.partial(site, b))?;
        let fb_ga = f.partial(site, b).try_mul(&g.partial(site, a))?;
        let diff = fa_gb.try_add(&fb_ga.scale(Complex64::new(-1.0, 0.0)))?;
        let xc = AmbientPolynomial::coordinate(sites, site, c);
        out = out.try_add(&xc.try_mul(&diff)?)?;
    }
    Ok(out)
}

/// The tensor bracket of two ambient representatives, unreduced.
pub fn ambient_bracket(f: &AmbientPolynomial, g: &AmbientPolynomial) -> Result<AmbientPolynomial> {
    if f.sites() != g.sites() {
        return Err(Error::SitesMismatch { left: f.sites(), right: g.sites() });
    }
    let mut out = AmbientPolynomial::zero(f.sites());
    for site in 0..f.sites() {
        out = out.try_add(&site_bracket(f, g, site)?)?;
    }
    Ok(out)
}

pub fn poisson_bracket_single(f: &SitePolynomial, g: &SitePolynomial) -> Result<SitePolynomial> {
    for p in [f, g] {
        if p.sites() != 1 {
            return Err(Error::NotSingleSite { sites: p.sites() });
        }
    }
    Ok(site_bracket(&f.to_ambient(), &g.to_ambient(), 0)?.reduce())
}

pub fn poisson_bracket_tensor(f: &SitePolynomial, g: &SitePolynomial) -> Result<SitePolynomial> {
    Ok(ambient_bracket(&f.to_ambient(), &g.to_ambient())?.reduce())
}

impl SitePolynomial {
    /// Tensor Poisson bracket `{self, other}`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        poisson_bracket_tensor(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str, sites: usize) -> SitePolynomial {
        parse_poly(s, sites).unwrap()
    }

    #[test]
    fn single_site_examples() {
        assert_eq!(poisson_bracket_single(&p("z1", 1), &p("x1", 1)).unwrap(), p("y1", 1));
        assert!(poisson_bracket_single(&p("x1", 1), &p("x1", 1)).unwrap().is_zero());
        assert_eq!(poisson_bracket_single(&p("x1", 1), &p("y1", 1)).unwrap(), p("z1", 1));
        assert_eq!(poisson_bracket_single(&p("y1", 1), &p("z1", 1)).unwrap(), p("x1", 1));
        assert!(matches!(
            poisson_bracket_single(&p("x1", 2), &p("x1", 2)),
            Err(Error::NotSingleSite { sites: 2 })
        ));
    }

    #[test]
    fn tensor_examples() {
        assert!(poisson_bracket_tensor(&p("x1", 2), &p("y2", 2)).unwrap().is_zero());
        assert_eq!(poisson_bracket_tensor(&p("z1", 2), &p("x1", 2)).unwrap(), p("y1", 2));
        assert_eq!(poisson_bracket_tensor(&p("z1*z2", 2), &p("x1", 2)).unwrap(), p("y1*z2", 2));
        assert!(poisson_bracket_tensor(&p("x1", 1), &p("x1", 2)).is_err());
    }

    #[test]
    fn tensor_matches_single_at_one_site() {
        let f = p("x1^2*z1 + 3*y1 - x1*y1", 1);
        let g = p("z1 + (2 + i)*x1*y1^2", 1);
        assert_eq!(
            poisson_bracket_tensor(&f, &g).unwrap(),
            poisson_bracket_single(&f, &g).unwrap()
        );
    }

    #[test]
    fn elementary_tensor_formula() {
        // {f1⊗f2, g1⊗g2} = {f1,g1}⊗f2g2 + f1g1⊗{f2,g2}
        let (f1, f2) = (p("x1*z1 + y1", 2), p("z2^2 - x2", 2));
        let (g1, g2) = (p("y1^2 + z1", 2), p("x2*y2", 2));
        let lhs = poisson_bracket_tensor(&(&f1 * &f2), &(&g1 * &g2)).unwrap();
        let b1 = poisson_bracket_tensor(&f1, &g1).unwrap();
        let b2 = poisson_bracket_tensor(&f2, &g2).unwrap();
        let rhs = &(&b1 * &(&f2 * &g2)) + &(&(&f1 * &g1) * &b2);
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn sphere_relation_is_central() {
        let r = AmbientPolynomial::sphere_relation(2, 0);
        let g = p("x1*y2 + z1^3", 2).to_ambient();
        assert!(ambient_bracket(&r, &g).unwrap().reduce().is_zero());
    }
}
