//! Angular Fourier decomposition and the radial trace of non-zero modes.

use dirac_kahler::boundary::AnalyticMode;
use dirac_kahler::modes::{angular_mode_trace_decay, fourier_decompose, reconstruct, theta_grid};
use num_complex::Complex64;

fn main() -> dirac_kahler::Result<()> {
    let theta = theta_grid(64);
    let samples: Vec<Complex64> = theta
        .iter()
        .map(|t| Complex64::new(1.0 + (2.0 * t).cos(), 0.5 * (-t).sin()))
        .collect();
    let modes = fourier_decompose(&samples, 4)?;
    for (k, c) in modes.truncated() {
        if c.norm() > 1e-12 {
            println!("k = {k:+}: {c:.4}");
        }
    }
    let back = reconstruct(&modes);
    let err = back.iter().zip(&samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("reconstruction error {err:.1e}");

    let cutoffs = [1e-1, 1e-2, 1e-3, 1e-4];
    for k in [0, 1, 2] {
        let mode = AnalyticMode { k, profiles: |r: f64| {
            let p = r.powi(k.abs());
            [p, p, p, p].map(|x| Complex64::new(x, 0.0))
        } };
        let report = angular_mode_trace_decay(&mode, &cutoffs)?;
        println!("k = {k}: {:?}, traces {:?}", report.status, report.magnitudes.iter().map(|m| format!("{m:.1e}")).collect::<Vec<_>>());
    }
    Ok(())
}
