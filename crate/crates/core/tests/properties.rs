use dirac_kahler::boundary::{boundary_form, weighted_trace_at, AnalyticMode, TraceVector, UnitaryBC};
use dirac_kahler::exterior::{codifferential, dirac_kahler, exterior_derivative};
use dirac_kahler::fields::random_smooth;
use dirac_kahler::forms::{hodge_star, inner_product, Domain, FormField, Space};
use dirac_kahler::grids::{make_grid_1d, make_radial_grid, Scheme};
use dirac_kahler::modes::fourier_decompose;
use dirac_kahler::spectral::{impose_bc, mode_inner_bc, solve_spectrum, sweep_bc, ConstraintMethod};
use dirac_kahler::exterior::assemble_operator;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn space_for(radial: bool, n: usize) -> Space {
    if radial {
        Space::radial(make_radial_grid(n, 1e-3, 1.0, 5).unwrap())
    } else {
        Space::interval(make_grid_1d(n, 0.0, 1.0, Scheme::default()).unwrap())
    }
}

fn domain_for(radial: bool, k: i32) -> Domain {
    if radial {
        Domain::RadialMode(k)
    } else {
        Domain::Interval
    }
}

fn max_diff(a: &FormField, b: &FormField) -> f64 {
    (a.as_vector() - b.as_vector()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hodge_star_is_an_involution_up_to_sign(seed in any::<u64>(), radial in any::<bool>(), k in -3i32..=3) {
        let space = space_for(radial, 24);
        let dom = domain_for(radial, k);
        let a = random_smooth(&space, dom, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let twice = hodge_star(&hodge_star(&a, dom.metric()).unwrap(), dom.metric()).unwrap();
        let n = dom.dimension();
        for (i, comp) in dom.components().iter().enumerate() {
            let p = comp.degree();
            let sign = if (p * (n - p)).is_multiple_of(2) { 1.0 } else { -1.0 };
            for (x, y) in twice.component_by_index(i).iter().zip(a.component_by_index(i)) {
                prop_assert!((x - y * sign).norm() <= 1e-13 * (1.0 + y.norm()));
            }
        }
    }

    #[test]
    fn inner_product_is_hermitian_and_positive(seed in any::<u64>(), radial in any::<bool>(), k in -2i32..=2) {
        let space = space_for(radial, 24);
        let dom = domain_for(radial, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_smooth(&space, dom, &mut rng).unwrap();
        let b = random_smooth(&space, dom, &mut rng).unwrap();
        let (ab, ba) = (inner_product(&a, &b).unwrap(), inner_product(&b, &a).unwrap());
        prop_assert!((ab - ba.conj()).norm() <= 1e-13 * (1.0 + ab.norm()));
        let aa = inner_product(&a, &a).unwrap();
        prop_assert!(aa.re > 0.0 && aa.im.abs() <= 1e-13 * aa.re);
    }

    #[test]
    fn operators_are_linear(seed in any::<u64>(), radial in any::<bool>(), k in -2i32..=2, zr in -2.0f64..2.0, zi in -2.0f64..2.0) {
        let space = space_for(radial, 24);
        let dom = domain_for(radial, k);
        let m = dom.metric();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_smooth(&space, dom, &mut rng).unwrap();
        let b = random_smooth(&space, dom, &mut rng).unwrap();
        let z = c(zr, zi);
        let combo = a.with_data(a.as_vector() + b.as_vector() * z).unwrap();
        let ops: [&dyn Fn(&FormField) -> FormField; 3] = [
            &|f| exterior_derivative(f).unwrap(),
            &|f| codifferential(f, m).unwrap(),
            &|f| dirac_kahler(f, m).unwrap(),
        ];
        for op in ops {
            let lhs = op(&combo);
            let rhs = a.with_data(op(&a).as_vector() + op(&b).as_vector() * z).unwrap();
            let scale = 1.0 + lhs.max_abs();
            prop_assert!(max_diff(&lhs, &rhs) <= 1e-12 * scale);
        }
    }

    #[test]
    fn boundary_form_is_antisymmetric(v in prop::collection::vec(-3.0f64..3.0, 16)) {
        let z: Vec<Complex64> = v.chunks(2).map(|p| c(p[0], p[1])).collect();
        let a = TraceVector::puncture([z[0], z[1], z[2], z[3]]);
        let b = TraceVector::puncture([z[4], z[5], z[6], z[7]]);
        let (ab, ba) = (boundary_form(&a, &b).unwrap(), boundary_form(&b, &a).unwrap());
        prop_assert!((ab + ba.conj()).norm() <= 1e-14 * (1.0 + ab.norm()));
        let a1 = TraceVector::endpoint(z[0], z[1]);
        let b1 = TraceVector::endpoint(z[2], z[3]);
        let (ab, ba) = (boundary_form(&a1, &b1).unwrap(), boundary_form(&b1, &a1).unwrap());
        prop_assert!((ab + ba.conj()).norm() <= 1e-14 * (1.0 + ab.norm()));
    }

    #[test]
    fn parseval(v in prop::collection::vec(-2.0f64..2.0, 2..=34)) {
        let samples: Vec<Complex64> = v.chunks(2).map(|p| c(p[0], *p.get(1).unwrap_or(&0.0))).collect();
        let n = samples.len();
        let k_max = ((n - 1) / 2) as i32;
        let modes = fourier_decompose(&samples, k_max).unwrap();
        let mean_square = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        if n % 2 == 1 {
            prop_assert!((modes.energy() - mean_square).abs() <= 1e-13 * (1.0 + mean_square));
        } else {
            prop_assert!(modes.energy() <= mean_square * (1.0 + 1e-13) + 1e-15);
        }
    }

    #[test]
    fn nonzero_modes_do_not_reach_the_puncture(k in 1i32..=3, v in prop::collection::vec(-2.0f64..2.0, 16)) {
        let coef: Vec<Complex64> = v.chunks(2).map(|p| c(p[0], p[1])).collect();
        let make = |off: usize| {
            let co = [coef[off], coef[off + 1], coef[off + 2], coef[off + 3]];
            AnalyticMode {
                k,
                profiles: move |r: f64| {
                    let p = r.powi(k);
                    [co[0] * p, co[1] * p / r, co[2] * p, co[3] * p * r]
                },
            }
        };
        let (a, b) = (make(0), make(4));
        let rho = 1e-4;
        let s = boundary_form(&weighted_trace_at(&a, rho).unwrap(), &weighted_trace_at(&b, rho).unwrap()).unwrap();
        prop_assert!(s.norm() <= 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eigenvalues_are_real_for_unitary_conditions(seed in any::<u64>(), lambda in 0.0f64..(2.0 * PI)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let line = space_for(false, 32);
        let op = assemble_operator(&line, Domain::Interval).unwrap();
        let s = solve_spectrum(&impose_bc(&op, &UnitaryBC::from_lambda(lambda), None, ConstraintMethod::Projection).unwrap(), 6).unwrap();
        prop_assert!(s.max_imag <= 10.0 * s.symmetry_defect);

        let disk = space_for(true, 32);
        let u = UnitaryBC::random(2, &mut rng);
        let op = assemble_operator(&disk, Domain::RadialMode(0)).unwrap();
        let s = solve_spectrum(&impose_bc(&op, &mode_inner_bc(0, &u), None, ConstraintMethod::Projection).unwrap(), 6).unwrap();
        prop_assert!(s.max_imag <= 10.0 * s.symmetry_defect);
    }
}

#[test]
fn eigenvalues_move_continuously_along_lambda() {
    let space = space_for(false, 32);
    let op = assemble_operator(&space, Domain::Interval).unwrap();
    let step = 0.01;
    let path: Vec<UnitaryBC> = (0..=60).map(|j| UnitaryBC::from_lambda(0.2 + step * j as f64)).collect();
    let right = UnitaryBC::from_lambda(PI);
    let sweep = sweep_bc(&op, &path, Some(&right), 6, ConstraintMethod::Projection).unwrap();
    for w in sweep.windows(2) {
        for (a, b) in w[0].eigenvalues.iter().zip(&w[1].eigenvalues) {
            assert!((a - b).abs() <= step, "{a} -> {b}");
        }
    }
}

#[test]
fn eigenvalues_move_continuously_along_unitary_path() {
    let space = space_for(true, 32);
    let op = assemble_operator(&space, Domain::RadialMode(0)).unwrap();
    // U(t) = exp(i t H) for a fixed Hermitian H with unit eigenvalues ±1
    let h = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.6, -0.8), c(0.6, 0.8), c(0.0, 0.0)]);
    let unitary = |t: f64| {
        let id = DMatrix::<Complex64>::identity(2, 2);
        UnitaryBC::new(id * c(t.cos(), 0.0) + &h * c(0.0, t.sin())).unwrap()
    };
    let step = 0.01;
    let path: Vec<UnitaryBC> = (0..=40).map(|j| unitary(0.3 + step * j as f64)).collect();
    let sweep = sweep_bc(&op, &path, None, 6, ConstraintMethod::Projection).unwrap();
    for w in sweep.windows(2) {
        for (a, b) in w[0].eigenvalues.iter().zip(&w[1].eigenvalues) {
            assert!((a - b).abs() <= 5.0 * step, "{a} -> {b}");
        }
    }
}

#[test]
fn uniform_quadrature_is_second_order() {
    let f = |x: f64| (3.0 * x).exp();
    let exact = ((3.0f64).exp() - 1.0) / 3.0;
    let err = |n: usize| {
        let g = make_grid_1d(n, 0.0, 1.0, Scheme::UniformTrapezoid).unwrap();
        (g.integrate(&g.sample(f)) - exact).abs()
    };
    for n in [17, 33, 65] {
        let ratio = err(n) / err(2 * n - 1);
        assert!((ratio - 4.0).abs() < 0.1, "n = {n}: ratio {ratio}");
    }
}
