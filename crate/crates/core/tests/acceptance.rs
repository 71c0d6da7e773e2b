//! One line per acceptance criterion; run with `--nocapture` to see them.

use std::f64::consts::PI;
use std::process::Command;

use dirac_kahler::boundary::{bc_subspace, boundary_term, form_matrix, UnitaryBC};
use dirac_kahler::exterior::{assemble_operator, dirac_green_residual, green_residual};
use dirac_kahler::fields::{random_compact, random_smooth};
use dirac_kahler::forms::{hodge_star, Component, Domain, Space};
use dirac_kahler::grids::{make_grid_1d, make_radial_grid, Scheme};
use dirac_kahler::sobolev::{Builtin, GrowthRate, ModeProfile, Verdict};
use dirac_kahler::spectral::{
    impose_bc, impose_constraints, solve_mode, solve_spectrum, symmetry_defect, ConstraintMethod, SpectrumResult,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn report(id: u32, name: &'static str, pass: bool, detail: String) -> Outcome {
    println!("[{}] #{id:<2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    Outcome { id, name, pass, detail }
}

fn interval(n: usize, scheme: Scheme) -> Space {
    Space::interval(make_grid_1d(n, 0.0, 1.0, scheme).unwrap())
}

fn disk(n: usize) -> Space {
    Space::radial(make_radial_grid(n, 1e-3, 1.0, 5).unwrap())
}

fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn hodge_involution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (line, plane) = (interval(32, Scheme::default()), disk(32));
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let (space, dom) = if i % 2 == 0 {
            (&line, Domain::Interval)
        } else {
            (&plane, Domain::RadialMode(rng.random_range(-3..=3)))
        };
        let a = random_smooth(space, dom, &mut rng).unwrap();
        let twice = hodge_star(&hodge_star(&a, dom.metric()).unwrap(), dom.metric()).unwrap();
        let n = dom.dimension();
        for (ci, comp) in dom.components().iter().enumerate() {
            let p = comp.degree();
            let sign = if p * (n - p) % 2 == 0 { 1.0 } else { -1.0 };
            for (x, y) in twice.component_by_index(ci).iter().zip(a.component_by_index(ci)) {
                worst = worst.max((x - y * sign).norm());
            }
        }
    }
    report(1, "Hodge involution", worst <= 1e-13, format!("max error {worst:.2e} (tol 1e-13, 100 fields)"))
}

fn formal_adjointness() -> Outcome {
    let mut residuals = Vec::new();
    for n in [16, 32, 64] {
        let space = interval(n, Scheme::ChebyshevClenshawCurtis);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut worst = 0.0_f64;
        for _ in 0..50 {
            let a = random_compact(&space, Domain::Interval, &mut rng).unwrap();
            let b = random_compact(&space, Domain::Interval, &mut rng).unwrap();
            worst = worst.max(green_residual(&a, &b, Domain::Interval.metric()).unwrap().norm());
        }
        residuals.push(worst);
    }
    let (r16, r32, r64) = (residuals[0], residuals[1], residuals[2]);
    let (o1, o2) = ((r16 / r32).log2(), (r32 / r64).log2());
    let pass = r64 <= 1e-8 && o2 > o1 && o1 > 0.0;
    report(
        2,
        "formal adjointness (compact support, Chebyshev)",
        pass,
        format!("n=16,32,64 residuals {r16:.2e}, {r32:.2e}, {r64:.2e} (tol 1e-8); per-doubling orders {o1:.2}, {o2:.2} increasing"),
    )
}

fn green_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for (space, dom) in [(interval(64, Scheme::default()), Domain::Interval), (disk(64), Domain::RadialMode(0))] {
        for _ in 0..50 {
            let a = random_smooth(&space, dom, &mut rng).unwrap();
            let b = random_smooth(&space, dom, &mut rng).unwrap();
            let lhs = dirac_green_residual(&a, &b, dom.metric()).unwrap();
            let rhs = boundary_term(&a, &b).unwrap();
            assert!(rhs.norm() > 1e-3, "traces should be nontrivial");
            worst = worst.max((lhs - rhs).norm());
        }
    }
    report(3, "Green vs boundary form", worst <= 1e-6, format!("max |residual - boundary term| {worst:.2e} (tol 1e-6, 50 pairs per domain)"))
}

fn cayley_isotropy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut iso, mut straddle_min) = (0.0_f64, f64::INFINITY);
    for d in [1, 2] {
        let j = form_matrix(d);
        for _ in 0..20 {
            let u = UnitaryBC::random(d, &mut rng);
            let b = bc_subspace(&u);
            for _ in 0..5 {
                let ta = &b * DMatrix::from_fn(d, 1, |_, _| rand_c(&mut rng));
                let tb = &b * DMatrix::from_fn(d, 1, |_, _| rand_c(&mut rng));
                iso = iso.max((ta.adjoint() * &j * &tb)[(0, 0)].norm());
            }
            // a trace with a unit component outside the subspace
            let t = DMatrix::from_fn(2 * d, 1, |_, _| rand_c(&mut rng));
            let outside = &t - &b * (b.adjoint() * &t);
            let w = &outside * Complex64::new(1.0 / outside.norm(), 0.0);
            let pairing = (b.adjoint() * &j * &w).camax();
            straddle_min = straddle_min.min(pairing);
        }
    }
    let pass = iso <= 1e-12 && straddle_min > 1e-8;
    report(
        4,
        "Cayley isotropy and maximality",
        pass,
        format!("max |Σ| on subspace {iso:.2e} (tol 1e-12); min straddling pairing {straddle_min:.2e} (> 0)"),
    )
}

fn interval_oracle() -> Outcome {
    let space = interval(64, Scheme::default());
    let op = assemble_operator(&space, Domain::Interval).unwrap();
    let c = impose_bc(&op, &UnitaryBC::from_lambda(PI), None, ConstraintMethod::Projection).unwrap();
    let s = solve_spectrum(&c, 10).unwrap();
    let mut rel = 0.0_f64;
    let mut eig_err = 0.0_f64;
    let expected = [-5.0, -4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0, 5.0];
    let grid = space.grid();
    for ((mu, m), v) in s.eigenvalues.iter().zip(expected).zip(&s.eigenvectors) {
        rel = rel.max((mu - m * PI).abs() / (m * PI).abs());
        let f = v.component(Component::C0);
        let sin: Vec<f64> = grid.nodes().iter().map(|x| (m.abs() * PI * x).sin()).collect();
        let overlap: Complex64 = grid
            .weights()
            .iter()
            .zip(f.iter().zip(&sin))
            .map(|(w, (fi, si))| fi * (w * si))
            .sum();
        let phase = overlap / overlap.norm();
        let err: f64 = grid
            .weights()
            .iter()
            .zip(f.iter().zip(&sin))
            .map(|(w, (fi, si))| w * (fi - phase * si).norm_sqr())
            .sum::<f64>()
            .sqrt();
        eig_err = eig_err.max(err);
    }
    // the physical zero mode f = 0, g = 1 lies in the detected kernel
    let kernel = DMatrix::from_columns(&s.zero_modes.iter().map(|z| z.as_vector().clone()).collect::<Vec<_>>());
    let n = space.len();
    let mut g1 = nalgebra::DVector::<Complex64>::zeros(2 * n);
    for i in 0..n {
        g1[n + i] = Complex64::new(1.0, 0.0);
    }
    let proj = &kernel * (kernel.clone().pseudo_inverse(1e-12).unwrap() * &g1);
    let miss = (&g1 - proj).norm() / g1.norm();
    let pass = s.eigenvalues.len() == 10 && rel <= 1e-6 && eig_err <= 1e-5 && !s.zero_modes.is_empty() && miss < 1e-8;
    report(
        5,
        "1D spectrum oracle (λ = π)",
        pass,
        format!(
            "max rel error of ±mπ (m ≤ 5) {rel:.2e} (tol 1e-6); eigenfunction L2 error {eig_err:.2e} (tol 1e-5); {} zero modes, constant outside kernel {miss:.1e}",
            s.zero_modes.len()
        ),
    )
}

fn lambda_limits() -> Outcome {
    let b0 = bc_subspace(&UnitaryBC::from_lambda(0.0));
    let bpi = bc_subspace(&UnitaryBC::from_lambda(PI));
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let pass = b0[(0, 0)] == one && b0[(1, 0)] == zero && bpi[(0, 0)] == zero && bpi[(1, 0)] == one;
    report(
        6,
        "λ-family limiting cases",
        pass,
        format!("λ=0 → ({}, {}), λ=π → ({}, {}) (exact)", b0[(0, 0)], b0[(1, 0)], bpi[(0, 0)], bpi[(1, 0)]),
    )
}

fn positive(s: &SpectrumResult, count: usize) -> Vec<f64> {
    s.eigenvalues.iter().copied().filter(|&e| e > 0.0).take(count).collect()
}

fn mode_locality() -> Outcome {
    let space = disk(64);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let unitaries: Vec<UnitaryBC> = (0..5).map(|_| UnitaryBC::random(2, &mut rng)).collect();
    let mut spread = 0.0_f64;
    for k in [1, 2] {
        let spectra: Vec<Vec<f64>> = unitaries
            .iter()
            .map(|u| positive(&solve_mode(&space, k, u, None, 10, ConstraintMethod::Projection).unwrap(), 5))
            .collect();
        for s in &spectra[1..] {
            assert_eq!(s.len(), 5);
            for (a, b) in s.iter().zip(&spectra[0]) {
                spread = spread.max((a - b).abs());
            }
        }
    }
    let plus = solve_mode(&space, 0, &UnitaryBC::identity(2), None, 10, ConstraintMethod::Projection).unwrap();
    let minus = solve_mode(&space, 0, &UnitaryBC::minus_identity(2), None, 10, ConstraintMethod::Projection).unwrap();
    let gap = positive(&plus, 5)
        .iter()
        .zip(positive(&minus, 5))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    report(
        7,
        "point-interaction mode locality",
        spread <= 1e-8 && gap >= 1e-3,
        format!("k=1,2 spread over 5 random U {spread:.2e} (tol 1e-8); k=0 I vs -I max difference {gap:.3} (≥ 1e-3)"),
    )
}

fn symmetry_defects() -> Outcome {
    let mut worst = 0.0_f64;
    let line = interval(64, Scheme::default());
    let op = assemble_operator(&line, Domain::Interval).unwrap();
    for lambda in [0.0, 0.7, PI / 2.0, PI, 4.0] {
        let c = impose_bc(&op, &UnitaryBC::from_lambda(lambda), Some(&UnitaryBC::from_lambda(1.3)), ConstraintMethod::Projection).unwrap();
        worst = worst.max(symmetry_defect(&c));
    }
    let plane = disk(64);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut family = vec![UnitaryBC::identity(2), UnitaryBC::minus_identity(2)];
    family.extend((0..3).map(|_| UnitaryBC::random(2, &mut rng)));
    for k in 0..=2 {
        let op = assemble_operator(&plane, Domain::RadialMode(k)).unwrap();
        for u in &family {
            let inner = dirac_kahler::spectral::mode_inner_bc(k, u);
            let c = impose_bc(&op, &inner, None, ConstraintMethod::Projection).unwrap();
            worst = worst.max(symmetry_defect(&c));
        }
    }
    // f = 2i g at both ends is not isotropic: Σ(t, t) = 4i|g|²
    let n = line.len();
    let mut rows = DMatrix::zeros(2, op.dim());
    for (r, node) in [(0, 0), (1, n - 1)] {
        rows[(r, node)] = Complex64::new(1.0, 0.0);
        rows[(r, n + node)] = Complex64::new(0.0, -2.0);
    }
    let bad = symmetry_defect(&impose_constraints(&op, rows, ConstraintMethod::Projection).unwrap());
    report(
        8,
        "symmetry defect",
        worst <= 1e-8 && bad >= 1e-2,
        format!("max defect over unitary BCs {worst:.2e} (tol 1e-8); non-isotropic constraint {bad:.3} (≥ 1e-2)"),
    )
}

fn sobolev_examples() -> Outcome {
    let cutoffs = Builtin::default_cutoffs();
    let sqrt = Builtin::SqrtX.diagnose(&cutoffs).unwrap();
    let sqrt_dev = sqrt
        .cutoffs
        .iter()
        .zip(&sqrt.seminorm_sequence)
        .map(|(c, s)| (s / (0.25 * (1.0 / c).ln()) - 1.0).abs())
        .fold(0.0, f64::max);
    let sqrt_ok = sqrt.verdict == Verdict::NotInH1
        && matches!(sqrt.divergence_rate.as_ref().map(|f| f.rate), Some(GrowthRate::Log))
        && sqrt_dev <= 0.02;
    let heav = Builtin::Heaviside.diagnose(&cutoffs).unwrap();
    let log3 = Builtin::LogThirdR.diagnose(&cutoffs).unwrap();
    let exact = 2.0 * PI / 3.0 * (2f64).ln().powf(-1.0 / 3.0);
    let log3_ok = log3.verdict == Verdict::InH1 && log3.limit_estimate.is_some_and(|l| (l / exact - 1.0).abs() <= 1e-3);
    let mode = Builtin::parse("mode-profile", ModeProfile::One, 1).unwrap().diagnose(&cutoffs).unwrap();
    let pass = sqrt_ok && heav.verdict == Verdict::NotInH1 && log3_ok && mode.verdict == Verdict::NotInH1;
    report(
        9,
        "Sobolev diagnostics",
        pass,
        format!(
            "sqrt-x {} (log, max dev from ln(1/c)/4 {:.1e}); heaviside {}; log-third-r {} (limit {:.6} vs {exact:.6}); f=1,k=1 {}",
            sqrt.verdict,
            sqrt_dev,
            heav.verdict,
            log3.verdict,
            log3.limit_estimate.unwrap_or(f64::NAN),
            mode.verdict
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("random.toml");
    std::fs::write(&cfg, "[grid]\nn = 24\n\n[bc]\nrandom = 2\n\n[spectrum]\ncount = 4\nmodes = \"0..1\"\n").unwrap();
    let cfg = cfg.to_string_lossy().into_owned();
    let runs: [&[&str]; 4] = [
        &["check-adjoint"],
        &["check-adjoint", "--grid", "radial"],
        &["boundary-form", "--bc.lambda", "0.4"],
        &["spectrum", "--config", &cfg],
    ];
    let mut identical = true;
    for args in runs {
        let outputs: Vec<Vec<u8>> = (0..2)
            .map(|_| {
                Command::new(env!("CARGO_BIN_EXE_dk"))
                    .args(args)
                    .env("DK_SEED", "12345")
                    .output()
                    .unwrap()
                    .stdout
            })
            .collect();
        identical &= !outputs[0].is_empty() && outputs[0] == outputs[1];
    }
    report(10, "determinism", identical, format!("{} CLI invocations repeated with DK_SEED=12345, byte-identical: {identical}", runs.len()))
}

#[test]
fn acceptance() {
    let outcomes = [
        hodge_involution(),
        formal_adjointness(),
        green_consistency(),
        cayley_isotropy(),
        interval_oracle(),
        lambda_limits(),
        mode_locality(),
        symmetry_defects(),
        sobolev_examples(),
        determinism(),
    ];
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| format!("#{} {}: {}", o.id, o.name, o.detail))
        .collect();
    println!("{} of {} criteria pass", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
