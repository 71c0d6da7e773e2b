//! The Green identity for D = d + δ: the volume defect equals the boundary form.

use dirac_kahler::boundary::{boundary_term, green_boundary_term};
use dirac_kahler::exterior::{dirac_green_residual, green_residual};
use dirac_kahler::fields::{random_compact, random_smooth};
use dirac_kahler::forms::{Domain, Space};
use dirac_kahler::grids::{make_grid_1d, make_radial_grid, Scheme};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dirac_kahler::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let spaces = [
        ("interval", Space::interval(make_grid_1d(64, 0.0, 1.0, Scheme::default())?), Domain::Interval),
        ("disk k=0", Space::radial(make_radial_grid(64, 1e-3, 1.0, 5)?), Domain::RadialMode(0)),
        ("disk k=3", Space::radial(make_radial_grid(64, 1e-3, 1.0, 5)?), Domain::RadialMode(3)),
    ];
    for (name, space, dom) in spaces {
        let (a, b) = (random_smooth(&space, dom, &mut rng)?, random_smooth(&space, dom, &mut rng)?);
        let m = dom.metric();
        let lhs = dirac_green_residual(&a, &b, m)?;
        let rhs = boundary_term(&a, &b)?;
        let half = green_residual(&a, &b, m)? - green_boundary_term(&a, &b)?;
        println!("{name}: <Da,b>-<a,Db> = {lhs:.6}, boundary form = {rhs:.6}, d/δ gap = {:.1e}", half.norm());
    }

    println!("compactly supported pairs, Chebyshev nodes:");
    for n in [16, 32, 64] {
        let space = Space::interval(make_grid_1d(n, 0.0, 1.0, Scheme::ChebyshevClenshawCurtis)?);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let a = random_compact(&space, Domain::Interval, &mut rng)?;
            let b = random_compact(&space, Domain::Interval, &mut rng)?;
            worst = worst.max(green_residual(&a, &b, Domain::Interval.metric())?.norm());
        }
        println!("  n = {n:>2}: max residual {worst:.2e}");
    }
    Ok(())
}
