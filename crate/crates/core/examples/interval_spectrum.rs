//! Spectrum of D on [0, 1] with e^{iλ} conditions at both ends.

use dirac_kahler::boundary::UnitaryBC;
use dirac_kahler::exterior::assemble_operator;
use dirac_kahler::forms::{Domain, Space};
use dirac_kahler::grids::{make_grid_1d, Scheme};
use dirac_kahler::spectral::{impose_bc, solve_spectrum, ConstraintMethod};
use std::f64::consts::PI;

fn main() -> dirac_kahler::Result<()> {
    let space = Space::interval(make_grid_1d(64, 0.0, 1.0, Scheme::default())?);
    let op = assemble_operator(&space, Domain::Interval)?;
    for lambda in [PI, 0.0, 1.0] {
        let bc = UnitaryBC::from_lambda(lambda);
        let c = impose_bc(&op, &bc, None, ConstraintMethod::Projection)?;
        let s = solve_spectrum(&c, 6)?;
        let scaled: Vec<String> = s.eigenvalues.iter().map(|e| format!("{:+.6}", e / PI)).collect();
        println!(
            "lambda = {lambda:.4}: mu/pi = [{}], zero modes {}, defect {:.1e}",
            scaled.join(", "),
            s.zero_modes.len(),
            s.symmetry_defect
        );
    }
    Ok(())
}
