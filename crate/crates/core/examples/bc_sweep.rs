//! Spectral flow on [0, 1]: λ at the left end runs once around the circle,
//! the right end stays at λ = π.

use dirac_kahler::boundary::UnitaryBC;
use dirac_kahler::exterior::assemble_operator;
use dirac_kahler::forms::{Domain, Space};
use dirac_kahler::grids::{make_grid_1d, Scheme};
use dirac_kahler::spectral::{sweep_bc, ConstraintMethod};
use std::f64::consts::PI;

fn main() -> dirac_kahler::Result<()> {
    let space = Space::interval(make_grid_1d(40, 0.0, 1.0, Scheme::default())?);
    let op = assemble_operator(&space, Domain::Interval)?;
    let right = UnitaryBC::from_lambda(PI);
    let path: Vec<UnitaryBC> = (0..=8).map(|j| UnitaryBC::from_lambda(2.0 * PI * j as f64 / 8.0)).collect();
    println!("lambda,mu_0,mu_1,mu_2,mu_3");
    for (bc, s) in path.iter().zip(sweep_bc(&op, &path, Some(&right), 4, ConstraintMethod::Projection)?) {
        let row: Vec<String> = s.eigenvalues.iter().map(|e| format!("{e:.6}")).collect();
        println!("{:.4},{}", bc.label().unwrap_or(f64::NAN), row.join(","));
    }
    Ok(())
}
