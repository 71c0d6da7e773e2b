//! Hodge star and the L² pairing on the interval and on a radial mode.

use dirac_kahler::forms::{hodge_star, inner_product, l2_norm, Component, Domain, FormField, Space};
use dirac_kahler::grids::{make_grid_1d, make_radial_grid, Scheme};
use num_complex::Complex64;

fn main() -> dirac_kahler::Result<()> {
    let line = Space::interval(make_grid_1d(32, 0.0, 1.0, Scheme::default())?);
    let alpha = FormField::from_fn(line.clone(), Domain::Interval, |c, x| match c {
        Component::C0 => Complex64::new(x.sin(), 0.0),
        _ => Complex64::new(0.0, x * x),
    })?;
    let m = Domain::Interval.metric();
    let back = hodge_star(&hodge_star(&alpha, m)?, m)?;
    let err = (back.as_vector() - alpha.as_vector()).camax();
    println!("interval: |**a - a| = {err:.2e}, |a| = {:.6}", l2_norm(&alpha));

    let disk = Space::radial(make_radial_grid(32, 1e-3, 1.0, 5)?);
    let dom = Domain::RadialMode(2);
    let beta = FormField::from_fn(disk, dom, |c, r| match c {
        Component::C0 => Complex64::new(r * r, 0.0),
        Component::C1r => Complex64::new(0.0, r),
        Component::C1Theta => Complex64::new(r, r),
        _ => Complex64::new(1.0 - r, 0.0),
    })?;
    let star = hodge_star(&beta, dom.metric())?;
    let twice = hodge_star(&star, dom.metric())?;
    println!("disk k=2: <b,b> = {:.6}", inner_product(&beta, &beta)?.re);
    println!("disk k=2: <*b,*b> = {:.6}", inner_product(&star, &star)?.re);
    for (i, c) in dom.components().iter().enumerate() {
        let ratio = twice.component_by_index(i)[5] / beta.component_by_index(i)[5];
        println!("  ** on {:>8}: {:+.1}", c.label(), ratio.re);
    }
    Ok(())
}
