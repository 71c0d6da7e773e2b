//! Cayley-parameterized boundary conditions: U(1) at an endpoint, U(2) at a puncture.

use dirac_kahler::boundary::{bc_subspace, boundary_form, cayley_residual, TraceKind, TraceVector, UnitaryBC};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn trace(kind: TraceKind, col: &DMatrix<Complex64>) -> TraceVector {
    TraceVector::new(kind, col.iter().copied().collect()).unwrap()
}

fn main() -> dirac_kahler::Result<()> {
    for lambda in [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI] {
        let u = UnitaryBC::from_lambda(lambda);
        let b = bc_subspace(&u);
        println!("lambda = {lambda:.4}: subspace ({:.3}, {:.3})", b[(0, 0)], b[(1, 0)]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = UnitaryBC::random(2, &mut rng);
    let b = bc_subspace(&u);
    let t1 = trace(TraceKind::Puncture2d, &b.columns(0, 1).into_owned());
    let t2 = trace(TraceKind::Puncture2d, &b.columns(1, 1).into_owned());
    println!("random U(2): Cayley residuals {:.1e} {:.1e}", cayley_residual(&t1, &u)?, cayley_residual(&t2, &u)?);
    println!("  Sigma(t1, t2) = {:.1e}", boundary_form(&t1, &t2)?.norm());
    let off = TraceVector::puncture([1.0, 0.0, 0.0, 0.0].map(|x| Complex64::new(x, 0.0)));
    println!("  Sigma(t1, e1) = {:.4}", boundary_form(&t1, &off)?);
    Ok(())
}
