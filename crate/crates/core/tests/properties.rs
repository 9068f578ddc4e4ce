use num_complex::Complex64;
use proptest::prelude::*;

use schcalc::calculus::{
    eigendecompose, frac_deriv_multiplier, frac_power_neg, heat_apply, heat_kernel, poisson_kernel, poisson_spectral,
    FractionalOrder, GridFunction, Spectral, SpectralDecomposition, TimeGrid, DEFAULT_EIGEN_TOL,
};
use schcalc::lattice::{
    build_operator, check_rho_comparability, critical_radius, reverse_holder_constant, BallFamily, CriticalRadiusField,
    PeriodicGrid, Potential,
};
use schcalc::regularity::{
    bmo_alpha_norm, carleson_functional, carleson_growth_bound, holder_seminorm, poisson_derivative_field,
    square_function_gbeta, sup_growth_constant,
};

const N: usize = 32;
const P: f64 = 8.0;

fn grid() -> PeriodicGrid {
    PeriodicGrid::new(N, P).unwrap()
}

fn potential() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..4.0f64, N).prop_map(|mut v| {
        v[0] += 0.5;
        v
    })
}

fn samples() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, N).prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
}

fn decompose(v: &[f64]) -> SpectralDecomposition {
    let g = grid();
    let pot = Potential::new(v.to_vec(), "random").unwrap();
    eigendecompose(&build_operator(&g, &pot).unwrap(), DEFAULT_EIGEN_TOL).unwrap()
}

fn func(v: &[f64]) -> GridFunction {
    GridFunction::from_real(&grid(), v).unwrap()
}

fn max_diff(a: &GridFunction, b: &GridFunction) -> f64 {
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn smallest_eigenvalue_bounds_the_potential_minimum(v in potential()) {
        let s = decompose(&v);
        let vmin = v.iter().copied().fold(f64::MAX, f64::min);
        prop_assert!(s.lambda_min() >= vmin - 1e-9);
        prop_assert!(s.lambda_min() > 0.0);
    }

    #[test]
    fn critical_radius_shrinks_when_the_potential_grows(v in potential(), bump in prop::collection::vec(0.0..2.0f64, N)) {
        let g = grid();
        let a = Potential::new(v.clone(), "a").unwrap();
        let b = Potential::new(v.iter().zip(&bump).map(|(x, y)| x + y).collect(), "b").unwrap();
        for j in (0..N).step_by(5) {
            prop_assert!(critical_radius(&g, &b, j, 1).unwrap() <= critical_radius(&g, &a, j, 1).unwrap() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn reverse_holder_constant_is_nondecreasing_in_q(v in potential()) {
        let g = grid();
        let pot = Potential::new(v, "v").unwrap();
        let balls = BallFamily::dyadic(&g, 4);
        let c: Vec<f64> = [1.5, 2.0, 4.0].iter().map(|&q| reverse_holder_constant(&g, &pot, q, &balls).unwrap()).collect();
        prop_assert!(c[0] <= c[1] * (1.0 + 1e-12) && c[1] <= c[2] * (1.0 + 1e-12));
    }

    #[test]
    fn semigroups_contract(v in potential(), f in samples(), t in 0.0..5.0f64) {
        let s = decompose(&v);
        let f = func(&f);
        let l0 = s.lambda_min();
        let heat = heat_apply(&s, t, &f).unwrap();
        let pois = poisson_spectral(&s, t, &f).unwrap();
        prop_assert!(heat.l2_norm() <= (-t * l0).exp() * f.l2_norm() * (1.0 + 1e-10));
        prop_assert!(pois.l2_norm() <= (-t * l0.sqrt()).exp() * f.l2_norm() * (1.0 + 1e-10));
    }

    #[test]
    fn kernels_are_nonnegative(v in potential(), t in 0.05..5.0f64) {
        let s = decompose(&v);
        prop_assert!(heat_kernel(&s, t).unwrap().min() >= -1e-12);
        prop_assert!(poisson_kernel(&s, t).unwrap().min() >= -1e-12);
    }

    #[test]
    fn poisson_commutes_with_negative_powers(v in potential(), f in samples(), t in 0.01..3.0f64, sigma in 0.1..0.9f64) {
        let s = decompose(&v);
        let f = func(&f);
        let a = poisson_spectral(&s, t, &frac_power_neg(&s, sigma, &f, 256).unwrap()).unwrap();
        let b = frac_power_neg(&s, sigma, &poisson_spectral(&s, t, &f).unwrap(), 256).unwrap();
        prop_assert!(max_diff(&a, &b) <= 1e-10 * (1.0 + a.sup_norm()));
    }

    #[test]
    fn integer_derivatives_differentiate_the_coefficients(m in 1u32..4, t in 0.01..5.0f64, lambda in 0.01..1e3f64) {
        let r = lambda.sqrt();
        let exact = (-r).powi(m as i32) * (-t * r).exp();
        let got = frac_deriv_multiplier(&FractionalOrder::new(m as f64).unwrap(), t, lambda);
        prop_assert!((got - Complex64::new(exact, 0.0)).norm() <= 1e-12 * (1.0 + exact.abs()));
    }

    #[test]
    fn functionals_are_homogeneous(v in potential(), f in samples(), c in -5.0..5.0f64, alpha in 0.1..0.9f64) {
        let g = grid();
        let s = decompose(&v);
        let pot = Potential::new(v, "v").unwrap();
        let rho = CriticalRadiusField::compute(&g, &pot, 1).unwrap();
        let balls = BallFamily::dyadic(&g, 4);
        let tg = TimeGrid::log_uniform(1e-2, 10.0, 16).unwrap();
        let order = FractionalOrder::new(1.0).unwrap();
        let f = func(&f);
        let cf = f.scale(Complex64::new(c, 0.0));
        let close = |a: f64, b: f64| (a - c.abs() * b).abs() <= 1e-9 * (1.0 + a.abs());

        prop_assert!(close(holder_seminorm(&cf, alpha).unwrap(), holder_seminorm(&f, alpha).unwrap()));
        prop_assert!(close(bmo_alpha_norm(&cf, alpha, &balls, &rho).unwrap(), bmo_alpha_norm(&f, alpha, &balls, &rho).unwrap()));
        let fa = poisson_derivative_field(&s, &order, &f, &tg).unwrap();
        let fb = poisson_derivative_field(&s, &order, &cf, &tg).unwrap();
        prop_assert!(close(sup_growth_constant(&fb, alpha).unwrap(), sup_growth_constant(&fa, alpha).unwrap()));
        prop_assert!(close(
            carleson_functional(&fb, alpha, 1.0, &balls).unwrap().supremum,
            carleson_functional(&fa, alpha, 1.0, &balls).unwrap().supremum
        ));
        prop_assert!(close(
            square_function_gbeta(&s, 1.0, &cf, &tg).unwrap().l2_norm(),
            square_function_gbeta(&s, 1.0, &f, &tg).unwrap().l2_norm()
        ));
    }

    #[test]
    fn holder_seminorm_is_monotone_in_the_exponent(f in samples(), a in 0.05..0.95f64, gap in 0.01..0.5f64) {
        let b = (a + gap).min(1.0);
        let f = func(&f);
        let lhs = holder_seminorm(&f, a).unwrap();
        let rhs = holder_seminorm(&f, b).unwrap() * (P / 2.0).powf(b - a);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn carleson_is_bounded_by_the_growth_constant_per_ball(v in potential(), f in samples(), alpha in 0.1..0.9f64) {
        let g = grid();
        let s = decompose(&v);
        let balls = BallFamily::dyadic(&g, 4);
        let tg = TimeGrid::log_uniform(1e-2, 10.0, 24).unwrap();
        let field = poisson_derivative_field(&s, &FractionalOrder::new(1.5).unwrap(), &func(&f), &tg).unwrap();
        let c1 = sup_growth_constant(&field, alpha).unwrap();
        let rep = carleson_functional(&field, alpha, 1.5, &balls).unwrap();
        for (b, v) in balls.balls().iter().zip(&rep.per_ball) {
            if let Some(v) = v {
                prop_assert!(*v <= carleson_growth_bound(c1, alpha, &tg, b.radius) * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn functionals_vanish_on_zero() {
    let g = grid();
    let s = decompose(&[1.0; N]);
    let rho = CriticalRadiusField::compute(&g, &Potential::constant(&g, 1.0).unwrap(), 1).unwrap();
    let balls = BallFamily::dyadic(&g, 4);
    let tg = TimeGrid::log_uniform(1e-2, 10.0, 16).unwrap();
    let z = GridFunction::zeros(&g);
    let field = poisson_derivative_field(&s, &FractionalOrder::new(1.0).unwrap(), &z, &tg).unwrap();
    assert_eq!(holder_seminorm(&z, 0.5).unwrap(), 0.0);
    assert_eq!(bmo_alpha_norm(&z, 0.5, &balls, &rho).unwrap(), 0.0);
    assert_eq!(sup_growth_constant(&field, 0.5).unwrap(), 0.0);
    assert_eq!(carleson_functional(&field, 0.5, 1.0, &balls).unwrap().supremum, 0.0);
    assert_eq!(square_function_gbeta(&s, 1.0, &z, &tg).unwrap().l2_norm(), 0.0);
}

#[test]
fn comparability_is_one_for_constant_rho() {
    let g = grid();
    let rho = CriticalRadiusField::compute(&g, &Potential::constant(&g, 2.0).unwrap(), 1).unwrap();
    assert_eq!(check_rho_comparability(&g, &rho, 1.0).unwrap(), 1.0);
}
