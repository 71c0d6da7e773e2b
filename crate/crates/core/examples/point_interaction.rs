//! Point interactions at the origin of the plane: only the k = 0 mode feels U.

use dirac_kahler::boundary::UnitaryBC;
use dirac_kahler::forms::Space;
use dirac_kahler::grids::make_radial_grid;
use dirac_kahler::spectral::{solve_mode, ConstraintMethod};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn main() -> dirac_kahler::Result<()> {
    let space = Space::radial(make_radial_grid(48, 1e-3, 1.0, 5)?);
    let swap = UnitaryBC::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|x| Complex64::new(x, 0.0))))?;
    let family = [("I", UnitaryBC::identity(2)), ("-I", UnitaryBC::minus_identity(2)), ("swap", swap)];
    for k in 0..=2 {
        for (name, u) in &family {
            let s = solve_mode(&space, k, u, None, 4, ConstraintMethod::Projection)?;
            let vals: Vec<String> = s.eigenvalues.iter().map(|e| format!("{e:+.5}")).collect();
            println!("k = {k}, U = {name:>4}: [{}] zero modes {}", vals.join(", "), s.zero_modes.len());
        }
    }
    Ok(())
}
