//! Sup-norm estimation over `(S^2)^d`.
//!
//! Heuristic global maximization of `|P|`: a product-grid scan picks 20
//! seeds, then each seed is improved by block-coordinate ascent. A block step
//! freezes all sites but one, scans that site on a 48x96 `(theta, phi)` grid
//! and refines the best cell by golden-section search in `theta` and `phi`
//! alternately. Accuracy target: 1e-6 relative for total degree <= 6.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::{cartesian, SitePolynomial};
use crate::error::{Error, Result};

pub const MAX_SUP_NORM_SITES: usize = 4;

const GRID_THETA: usize = 48;
const GRID_PHI: usize = 96;
const SEEDS: usize = 20;
const MAX_ASCENT_ROUNDS: usize = 40;
const GOLDEN_ITERS: usize = 60;

/// Restriction of a polynomial to one site, other sites frozen.
struct SiteSlice {
    terms: Vec<([u32; 3], Complex64)>,
}

impl SiteSlice {
    fn new(p: &SitePolynomial, site: usize, points: &[[f64; 3]]) -> Self {
        let mut terms: Vec<([u32; 3], Complex64)> = Vec::new();
        for (m, c) in p.terms() {
            let mut coeff = *c;
            for (j, e) in m.exponents().iter().enumerate() {
                if j != site {
                    let q = points[j];
                    coeff *= q[0].powi(e[0] as i32) * q[1].powi(e[1] as i32) * q[2].powi(e[2] as i32);
                }
            }
            let key = m.site(site);
            match terms.iter_mut().find(|(k, _)| *k == key) {
                Some((_, acc)) => *acc += coeff,
                None => terms.push((key, coeff)),
            }
        }
        Self { terms }
    }

    fn abs_at(&self, theta: f64, phi: f64) -> f64 {
        let [x, y, z] = cartesian(theta, phi);
        self.terms
            .iter()
            .map(|(e, c)| c * (x.powi(e[0] as i32) * y.powi(e[1] as i32) * z.powi(e[2] as i32)))
            .sum::<Complex64>()
            .norm()
    }
}

fn grid_angles(n_theta: usize, n_phi: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = if n_theta == 1 { 0.0 } else { PI * i as f64 / (n_theta - 1) as f64 };
        for k in 0..n_phi {
            out.push((theta, TAU * k as f64 / n_phi as f64));
        }
    }
    out
}

/// Maximizes `g` over `[lo, hi]` by golden-section search, also checking the
/// endpoints. Returns `(argmax, max)`.
fn golden_max(g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..GOLDEN_ITERS {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(lo, g(lo)), (hi, g(hi)), (mid, g(mid)), (c, gc), (d, gd)]
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// One block step at `site`. Returns the improved value.
fn improve_site(
    p: &SitePolynomial,
    site: usize,
    angles: &mut [(f64, f64)],
    current: f64,
    scan: bool,
) -> f64 {
    let points: Vec<[f64; 3]> = angles.iter().map(|&(t, ph)| cartesian(t, ph)).collect();
    let slice = SiteSlice::new(p, site, &points);
    let (mut theta, mut phi) = angles[site];
    let mut best = current.max(slice.abs_at(theta, phi));

    if scan {
        for (t, ph) in grid_angles(GRID_THETA, GRID_PHI) {
            let v = slice.abs_at(t, ph);
            if v > best {
                best = v;
                theta = t;
                phi = ph;
            }
        }
    }

    let mut h_theta = PI / (GRID_THETA - 1) as f64;
    let mut h_phi = TAU / GRID_PHI as f64;
    for _ in 0..8 {
        let before = best;
        let (t, v) = golden_max(
            |t| slice.abs_at(t, phi),
            (theta - h_theta).max(0.0),
            (theta + h_theta).min(PI),
        );
        if v > best {
            best = v;
            theta = t;
        }
        let (ph, v) = golden_max(|ph| slice.abs_at(theta, ph), phi - h_phi, phi + h_phi);
        if v > best {
            best = v;
            phi = ph.rem_euclid(TAU);
        }
        h_theta *= 0.5;
        h_phi *= 0.5;
        if best - before <= 1e-16 * best.max(1.0) {
            break;
        }
    }
    angles[site] = (theta, phi);
    best
}

/// Estimate of `sup |P|` over the product of spheres.
pub fn sup_norm(p: &SitePolynomial) -> Result<f64> {
    let d = p.sites();
    if d > MAX_SUP_NORM_SITES {
        return Err(Error::InvalidInput(format!(
            "sup_norm supports at most {MAX_SUP_NORM_SITES} sites, got {d}"
        )));
    }
    if p.is_zero() {
        return Ok(0.0);
    }
    if p.total_degree() == 0 {
        return Ok(p.coefficient(&super::Monomial::one(d)).norm());
    }

    // Coarse product grid for seeding; per-site resolution shrinks with d so
    // the scan stays a few hundred thousand points.
    let (nt, np) = match d {
        1 => (GRID_THETA, GRID_PHI),
        2 => (12, 24),
        3 => (6, 10),
        _ => (4, 6),
    };
    let site_grid = grid_angles(nt, np);
    let site_points: Vec<[f64; 3]> = site_grid.iter().map(|&(t, ph)| cartesian(t, ph)).collect();
    let total = site_grid.len().pow(d as u32);
    let mut scored: Vec<(f64, usize)> = Vec::with_capacity(total);
    let mut pts = vec![[0.0; 3]; d];
    for flat in 0..total {
        let mut rem = flat;
        for slot in pts.iter_mut().rev() {
            *slot = site_points[rem % site_grid.len()];
            rem /= site_grid.len();
        }
        scored.push((p.evaluate_cartesian(&pts).norm(), flat));
    }
    // Stable order: value descending, then index ascending.
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut best = 0.0_f64;
    for &(value, flat) in scored.iter().take(SEEDS) {
        let mut angles = vec![(0.0, 0.0); d];
        let mut rem = flat;
        for slot in angles.iter_mut().rev() {
            *slot = site_grid[rem % site_grid.len()];
            rem /= site_grid.len();
        }
        let mut current = value;
        for _ in 0..MAX_ASCENT_ROUNDS {
            let before = current;
            for site in 0..d {
                current = improve_site(p, site, &mut angles, current, d > 1);
            }
            if current - before <= 1e-15 * current.max(1e-300) {
                break;
            }
        }
        best = best.max(current);
    }
    Ok(best)
}
