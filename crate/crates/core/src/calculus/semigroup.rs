use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{FourierSpectrum, FractionalOrder, GridFunction, Spectral};
use crate::lattice::PeriodicGrid;
use crate::{Error, Result};

/// `φ(λ_k)` for every eigenvalue, rejecting non-finite values.
pub fn multipliers(spec: &dyn Spectral, phi: &dyn Fn(f64) -> Complex64) -> Result<Vec<Complex64>> {
    spec.eigenvalues()
        .iter()
        .map(|&l| {
            let m = phi(l);
            if m.re.is_finite() && m.im.is_finite() {
                Ok(m)
            } else {
                Err(Error::NonFiniteMultiplier(l))
            }
        })
        .collect()
}

/// `Σ_k m_k ⟨f, e_k⟩ e_k`.
pub fn apply_multipliers(spec: &dyn Spectral, mult: &[Complex64], f: &GridFunction) -> Result<GridFunction> {
    if mult.len() != spec.len() {
        return Err(Error::SizeMismatch {
            expected: spec.len(),
            found: mult.len(),
        });
    }
    let mut c = spec.analyze(f)?;
    for (ck, m) in c.iter_mut().zip(mult) {
        *ck *= m;
    }
    Ok(spec.synthesize(&c))
}

/// `φ(L) f = Σ_k φ(λ_k) ⟨f, e_k⟩ e_k`.
pub fn apply_function(spec: &dyn Spectral, phi: &dyn Fn(f64) -> Complex64, f: &GridFunction) -> Result<GridFunction> {
    let mult = multipliers(spec, phi)?;
    apply_multipliers(spec, &mult, f)
}

fn real(phi: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
    move |l| Complex64::new(phi(l), 0.0)
}

fn check_time(t: f64, strict: bool) -> Result<()> {
    let ok = if strict { t > 0.0 } else { t >= 0.0 };
    if !(ok && t.is_finite()) {
        let bound = if strict { "positive" } else { "nonnegative" };
        return Err(Error::InvalidArgument(format!(
            "time must be finite and {bound}, got {t}"
        )));
    }
    Ok(())
}

/// `e^{-tL} f`.
pub fn heat_apply(spec: &dyn Spectral, t: f64, f: &GridFunction) -> Result<GridFunction> {
    check_time(t, false)?;
    apply_function(spec, &real(|l| (-t * l).exp()), f)
}

/// Heat kernel `k_t(x_i, x_j)`.
pub fn heat_kernel(spec: &dyn Spectral, t: f64) -> Result<DMatrix<f64>> {
    check_time(t, true)?;
    spec.kernel(&|l| (-t * l).exp())
}

/// `e^{-t√L} f`.
pub fn poisson_spectral(spec: &dyn Spectral, t: f64, f: &GridFunction) -> Result<GridFunction> {
    check_time(t, false)?;
    apply_function(spec, &real(|l| (-t * l.sqrt()).exp()), f)
}

/// Poisson kernel `P_t(x_i, x_j)`.
pub fn poisson_kernel(spec: &dyn Spectral, t: f64) -> Result<DMatrix<f64>> {
    check_time(t, true)?;
    spec.kernel(&|l| (-t * l.sqrt()).exp())
}

/// `Q_t = t² ∂_s k_s |_{s = t²}`, coefficients `-t² λ e^{-t² λ}`.
pub fn q_kernel(spec: &dyn Spectral, t: f64) -> Result<DMatrix<f64>> {
    check_time(t, true)?;
    let s = t * t;
    spec.kernel(&|l| -s * l * (-s * l).exp())
}

/// The Poisson semigroup of the free Laplacian on the torus.
pub fn classical_poisson_apply(grid: &PeriodicGrid, t: f64, f: &GridFunction) -> Result<GridFunction> {
    check_time(t, false)?;
    let spec = FourierSpectrum::free(grid);
    poisson_spectral(&spec, t, f)
}

/// Spectral multiplier of `∂_t^β e^{-t√L}`: `e^{iπβ} λ^{β/2} e^{-t√λ}`.
pub fn frac_deriv_multiplier(order: &FractionalOrder, t: f64, lambda: f64) -> Complex64 {
    let a = lambda.sqrt();
    let power = if order.is_integer() {
        a.powi(order.beta() as i32)
    } else {
        lambda.powf(0.5 * order.beta())
    };
    order.phase() * (power * (-t * a).exp())
}

/// `∂_t^β P_t f` through the spectral closed form.
pub fn frac_deriv_poisson_spectral(
    spec: &dyn Spectral,
    order: &FractionalOrder,
    t: f64,
    f: &GridFunction,
) -> Result<GridFunction> {
    check_time(t, true)?;
    apply_function(spec, &|l| frac_deriv_multiplier(order, t, l), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{eigendecompose, DEFAULT_EIGEN_TOL};
    use crate::lattice::{build_operator, Potential};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn quadratic_spec(n: usize, p: f64) -> crate::calculus::SpectralDecomposition {
        let g = PeriodicGrid::new(n, p).unwrap();
        eigendecompose(
            &build_operator(&g, &Potential::quadratic(&g)).unwrap(),
            DEFAULT_EIGEN_TOL,
        )
        .unwrap()
    }

    fn wave(grid: &PeriodicGrid) -> GridFunction {
        GridFunction::from_fn(grid, |x| Complex64::new((1.3 * x).sin() + 0.2 * x * x, (0.7 * x).cos()))
    }

    #[test]
    fn identity_and_operator_multipliers() {
        let spec = quadratic_spec(48, 6.0);
        let g = *spec.grid();
        let f = wave(&g);
        let same = apply_function(&spec, &|_| c(1.0), &f).unwrap();
        assert!(same.max_abs_diff(&f).unwrap() < 1e-12);

        let op = build_operator(&g, &Potential::quadratic(&g)).unwrap();
        let lf = apply_function(&spec, &|l| c(l), &f).unwrap();
        let direct = GridFunction::new(&g, op.apply(f.samples())).unwrap();
        assert!(lf.max_abs_diff(&direct).unwrap() < 1e-8 * spec.lambda_max());

        assert!(matches!(
            apply_function(&spec, &|_| c(f64::NAN), &f),
            Err(Error::NonFiniteMultiplier(_))
        ));
    }

    #[test]
    fn heat_on_eigenvector_and_semigroup_law() {
        let spec = quadratic_spec(48, 6.0);
        let e3 = spec.eigenvector(3).unwrap();
        let out = heat_apply(&spec, 1.0, &e3).unwrap();
        let expect = e3.scale(c((-spec.eigenvalues()[3]).exp()));
        assert!(out.max_abs_diff(&expect).unwrap() < 1e-12);

        let f = wave(spec.grid());
        assert!(heat_apply(&spec, 0.0, &f).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
        let two_step = heat_apply(&spec, 0.3, &heat_apply(&spec, 0.2, &f).unwrap()).unwrap();
        let one_step = heat_apply(&spec, 0.5, &f).unwrap();
        assert!(two_step.max_abs_diff(&one_step).unwrap() < 1e-10);
    }

    #[test]
    fn constant_potential_ground_mode_identities() {
        let g = PeriodicGrid::new(64, 8.0).unwrap();
        let mu = 0.8;
        let spec = FourierSpectrum::constant(&g, mu).unwrap();
        let one = GridFunction::constant(&g, c(1.0));
        for t in [0.1, 1.0, 3.0] {
            let h = heat_apply(&spec, t, &one).unwrap();
            assert!(h.max_abs_diff(&one.scale(c((-t * mu).exp()))).unwrap() < 1e-12);
            let k = heat_kernel(&spec, t).unwrap();
            let pk = poisson_kernel(&spec, t).unwrap();
            let qk = q_kernel(&spec, t).unwrap();
            for i in [0, 17, 63] {
                let mass = g.spacing() * k.row(i).sum();
                assert!((mass - (-t * mu).exp()).abs() < 1e-12);
                let pmass = g.spacing() * pk.row(i).sum();
                assert!((pmass - (-t * mu.sqrt()).exp()).abs() < 1e-12);
                let qmass = g.spacing() * qk.row(i).sum();
                let s = t * t;
                assert!((qmass + s * mu * (-s * mu).exp()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernels_are_symmetric_positive_and_reproduce_apply() {
        let spec = quadratic_spec(40, 5.0);
        let g = *spec.grid();
        let f = wave(&g);
        for t in [0.05, 0.5] {
            let k = heat_kernel(&spec, t).unwrap();
            let p = poisson_kernel(&spec, t).unwrap();
            assert!((&k - k.transpose()).amax() < 1e-12);
            assert!((&p - p.transpose()).amax() < 1e-12);
            assert!(k.min() >= -1e-12 && p.min() >= -1e-12);
            let by_kernel: Vec<Complex64> = (0..g.len())
                .map(|i| (0..g.len()).map(|j| f.samples()[j] * p[(i, j)]).sum::<Complex64>() * g.spacing())
                .collect();
            let direct = poisson_spectral(&spec, t, &f).unwrap();
            for (a, b) in by_kernel.iter().zip(direct.samples()) {
                assert!((a - b).norm() < 1e-12 * f.sup_norm().max(1.0) * g.len() as f64);
            }
        }
    }

    #[test]
    fn q_kernel_matches_time_difference_of_heat_kernel() {
        let spec = quadratic_spec(32, 4.0);
        let t: f64 = 0.4;
        let s = t * t;
        let d = 1e-4;
        let q = q_kernel(&spec, t).unwrap();
        let fd = (heat_kernel(&spec, s + d).unwrap() - heat_kernel(&spec, s - d).unwrap()) * (s / (2.0 * d));
        let scale = q.amax();
        assert!((q - fd).amax() < 1e-6 * scale);
    }

    #[test]
    fn free_q_kernel_rows_sum_to_zero() {
        let g = PeriodicGrid::new(32, 4.0).unwrap();
        let q = q_kernel(&FourierSpectrum::free(&g), 0.3).unwrap();
        for i in 0..32 {
            assert!(q.row(i).sum().abs() < 1e-10);
        }
    }

    #[test]
    fn classical_poisson_on_modes() {
        let g = PeriodicGrid::new(32, 4.0).unwrap();
        let one = GridFunction::constant(&g, c(2.0));
        assert!(
            classical_poisson_apply(&g, 5.0, &one)
                .unwrap()
                .max_abs_diff(&one)
                .unwrap()
                < 1e-12
        );
        let k = 3usize;
        let mode = GridFunction::new(
            &g,
            (0..32)
                .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k * j) as f64 / 32.0))
                .collect(),
        )
        .unwrap();
        let lam = crate::lattice::free_eigenvalue(&g, k);
        let out = classical_poisson_apply(&g, 0.7, &mode).unwrap();
        assert!(out.max_abs_diff(&mode.scale(c((-0.7 * lam.sqrt()).exp()))).unwrap() < 1e-12);
    }

    #[test]
    fn poisson_solves_the_wave_equation() {
        let spec = quadratic_spec(48, 6.0);
        let g = *spec.grid();
        let f = wave(&g);
        let op = build_operator(&g, &Potential::quadratic(&g)).unwrap();
        let t = 0.5;
        let d = 1e-3;
        let pt = poisson_spectral(&spec, t, &f).unwrap();
        let plus = poisson_spectral(&spec, t + d, &f).unwrap();
        let minus = poisson_spectral(&spec, t - d, &f).unwrap();
        let second: Vec<Complex64> = plus
            .samples()
            .iter()
            .zip(minus.samples())
            .zip(pt.samples())
            .map(|((a, b), m)| (a + b - 2.0 * m) / (d * d))
            .collect();
        let lp = op.apply(pt.samples());
        // Truncation error d²/12 · max λ² e^{-t√λ} |c_k|, bounded generously.
        let bound = spec
            .eigenvalues()
            .iter()
            .map(|l| l * l * (-t * l.sqrt()).exp())
            .fold(0.0, f64::max)
            * d
            * d
            * f.l2_norm()
            / g.spacing().sqrt();
        for (a, b) in second.iter().zip(&lp) {
            assert!((a - b).norm() <= bound + 1e-6 * b.norm().max(1.0));
        }
    }

    #[test]
    fn integer_orders_are_true_derivatives() {
        let spec = quadratic_spec(32, 4.0);
        let t = 0.6;
        for (beta, sign) in [(1.0, -1.0), (2.0, 1.0)] {
            let o = FractionalOrder::new(beta).unwrap();
            for &l in spec.eigenvalues() {
                let a = l.sqrt();
                let expect = sign * a.powi(beta as i32) * (-t * a).exp();
                assert_eq!(frac_deriv_multiplier(&o, t, l), c(expect));
            }
        }
        let half = FractionalOrder::new(0.5).unwrap();
        let e = spec.eigenvector(5).unwrap();
        let out = frac_deriv_poisson_spectral(&spec, &half, 1.0, &e).unwrap();
        let l = spec.eigenvalues()[5];
        let modulus = l.powf(0.25) * (-l.sqrt()).exp();
        for (a, b) in out.samples().iter().zip(e.samples()) {
            assert!((a.norm() - modulus * b.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_time_is_rejected() {
        let spec = quadratic_spec(16, 2.0);
        let f = wave(spec.grid());
        assert!(heat_apply(&spec, -1.0, &f).is_err());
        assert!(heat_kernel(&spec, 0.0).is_err());
    }
}
