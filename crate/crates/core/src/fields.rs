//! Random smooth test fields for property checks and the CLI.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::forms::{Domain, FormField, Space};

/// Half-width of [`random_compact`]'s support relative to the grid length.
pub const COMPACT_HALF_WIDTH: f64 = 0.45;

/// `exp(-1/(1 - t²))` on `|t| < 1`, zero outside.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

fn extent(space: &Space) -> (f64, f64) {
    let nodes = space.nodes();
    (nodes[0], nodes[nodes.len() - 1])
}

fn random_coefficients<R: Rng + ?Sized>(domain: Domain, rng: &mut R) -> Vec<[Complex64; 4]> {
    domain
        .components()
        .iter()
        .map(|_| {
            [0; 4].map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        })
        .collect()
}

fn profile(c: &[Complex64; 4], s: f64) -> Complex64 {
    c[0] + c[1] * s + c[2] * s * s + c[3] * (PI * s).cos()
}

/// Every component a random combination of `1, s, s², cos(πs)` in the
/// normalized coordinate `s ∈ [0, 1]`; traces are generically nonzero.
pub fn random_smooth<R: Rng + ?Sized>(space: &Space, domain: Domain, rng: &mut R) -> Result<FormField> {
    let coeffs = random_coefficients(domain, rng);
    let (a, b) = extent(space);
    FormField::from_fn(space.clone(), domain, |comp, x| {
        let ci = domain.index_of(comp).unwrap_or(0);
        profile(&coeffs[ci], (x - a) / (b - a))
    })
}

/// A random smooth field multiplied by a bump supported strictly inside
/// the grid.
pub fn random_compact<R: Rng + ?Sized>(space: &Space, domain: Domain, rng: &mut R) -> Result<FormField> {
    let coeffs = random_coefficients(domain, rng);
    let (a, b) = extent(space);
    let (mid, half) = (0.5 * (a + b), COMPACT_HALF_WIDTH * (b - a));
    FormField::from_fn(space.clone(), domain, |comp, x| {
        let ci = domain.index_of(comp).unwrap_or(0);
        profile(&coeffs[ci], (x - a) / (b - a)) * bump((x - mid) / half)
    })
}
