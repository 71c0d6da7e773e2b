//! H¹ membership of the singular profiles near a point.

use dirac_kahler::sobolev::{Builtin, ModeProfile, SampledProfile};

fn main() -> dirac_kahler::Result<()> {
    let cases = [
        Builtin::parse("sqrt-x", ModeProfile::One, 0)?,
        Builtin::parse("heaviside", ModeProfile::One, 0)?,
        Builtin::parse("log-third-r", ModeProfile::One, 0)?,
        Builtin::parse("mode-profile", ModeProfile::One, 1)?,
        Builtin::parse("mode-profile", ModeProfile::Linear, 1)?,
    ];
    for b in cases {
        let v = b.diagnose(&Builtin::default_cutoffs())?;
        let tail = v.seminorm_sequence.last().copied().unwrap_or(f64::NAN);
        match &v.divergence_rate {
            Some(fit) => println!("{:>14}: {} ({}, slope {:.4}), last {tail:.4}", b.name(), v.verdict, fit.rate, fit.slope),
            None => println!("{:>14}: {}, last {tail:.4}", b.name(), v.verdict),
        }
    }

    let x: Vec<f64> = std::iter::once(0.0).chain((0..=600).map(|i| 10f64.powf(-7.0 + i as f64 / 100.0))).collect();
    let f: Vec<f64> = x.iter().map(|t| t.powf(0.75)).collect();
    let sampled = SampledProfile::new(x, f, false)?;
    let v = sampled.diagnose(&sampled.default_cutoffs(5))?;
    println!("sampled x^(3/4): {}", v.verdict);
    Ok(())
}
