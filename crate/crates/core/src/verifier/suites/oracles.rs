use num_complex::Complex64;

use super::super::{Context, Tolerance, VerdictReport};
use crate::calculus::{
    apply_function, frac_deriv_poisson_spectral, frac_deriv_quadrature, frac_power_neg, frac_power_pos,
    laplace_multiplier, poisson_spectral, poisson_subordination, FractionalOrder, GridFunction, MultiplierProfile,
};
use crate::testfns::random_smooth;
use crate::Result;

const ORACLE_TOL: f64 = 1e-5;
const TIMES: [f64; 4] = [0.01, 0.1, 1.0, 10.0];
const SUBORDINATION_POINTS: usize = 256;
const DERIVATIVE_POINTS: usize = 512;
const POWER_POINTS: usize = 256;
const MULTIPLIER_ORDER: usize = 16;

fn deviation(a: &GridFunction, b: &GridFunction, f: &GridFunction) -> Result<f64> {
    Ok(a.max_abs_diff(b)? / f.sup_norm())
}

fn merged(base: &[f64], extra: &[f64], admit: impl Fn(f64) -> bool) -> Vec<f64> {
    let mut v: Vec<f64> = base.iter().chain(extra).copied().filter(|x| admit(*x)).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Every quadrature route against its spectral closed form on seeded
/// random probes at the configured resolution.
pub fn verify_oracles(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let grid = ctx.grid(cfg.grid_n)?;
    let spec = ctx.spectrum(&grid, &cfg.potential)?;
    let spec = spec.as_ref();
    let cutoff = grid.len() / 2 - 1;
    let probes: Vec<GridFunction> = (0..cfg.probes as u64)
        .map(|i| random_smooth(&grid, cfg.seed.wrapping_add(i), cutoff))
        .collect::<Result<_>>()?;
    let tol = Tolerance::AtMost {
        bound: ctx.tol(ORACLE_TOL),
    };
    let mut report = ctx.report("oracles");

    let worst = |route: &dyn Fn(&GridFunction) -> Result<(GridFunction, GridFunction)>| -> Result<f64> {
        let mut d: f64 = 0.0;
        for f in &probes {
            let (a, b) = route(f)?;
            d = d.max(deviation(&a, &b, f)?);
        }
        Ok(d)
    };

    let d = TIMES.iter().try_fold(0.0f64, |acc, &t| -> Result<f64> {
        Ok(acc.max(worst(&|f| {
            Ok((
                poisson_subordination(spec, t, f, SUBORDINATION_POINTS)?,
                poisson_spectral(spec, t, f)?,
            ))
        })?))
    })?;
    report.check("subordination Poisson vs spectral", d, tol);

    for beta in merged(&[0.5, 1.5], &cfg.betas, |b| b.fract() != 0.0) {
        let order = FractionalOrder::new(beta)?;
        let d = TIMES.iter().try_fold(0.0f64, |acc, &t| -> Result<f64> {
            Ok(acc.max(worst(&|f| {
                Ok((
                    frac_deriv_quadrature(spec, &order, t, f, DERIVATIVE_POINTS)?,
                    frac_deriv_poisson_spectral(spec, &order, t, f)?,
                ))
            })?))
        })?;
        report.check(format!("fractional derivative beta={beta} vs spectral"), d, tol);
    }

    for sigma in merged(&[0.3, 1.2], &cfg.sigmas, |s| s > 0.0 && s < 2.0) {
        let d = worst(&|f| {
            let exact = apply_function(spec, &|l| Complex64::new(l.powf(-0.5 * sigma), 0.0), f)?;
            Ok((frac_power_neg(spec, sigma, f, POWER_POINTS)?, exact))
        })?;
        report.check(format!("negative power sigma={sigma} vs spectral"), d, tol);
    }

    for sigma in merged(&[0.3, 0.7], &cfg.sigmas, |s| s > 0.0 && s < 1.0) {
        let d = worst(&|f| {
            let exact = apply_function(spec, &|l| Complex64::new(l.powf(0.5 * sigma), 0.0), f)?;
            Ok((frac_power_pos(spec, sigma, f, POWER_POINTS)?, exact))
        })?;
        report.check(format!("positive power sigma={sigma} vs spectral"), d, tol);
    }

    let profiles = [
        MultiplierProfile::Constant(1.0),
        MultiplierProfile::Indicator { end: 1.0 },
        MultiplierProfile::Cosine {
            omega: 2.0 * std::f64::consts::PI,
        },
    ];
    for a in &profiles {
        let d = worst(&|f| {
            let exact = apply_function(
                spec,
                &|l| Complex64::new(a.closed_form(l).expect("builtin profiles have closed forms"), 0.0),
                f,
            )?;
            Ok((laplace_multiplier(spec, a, f, MULTIPLIER_ORDER)?, exact))
        })?;
        report.check(format!("Laplace multiplier {a:?} vs closed form"), d, tol);
    }

    report.info("probes", probes.len() as f64, Tolerance::AtLeast { bound: 10.0 });
    Ok(report)
}
