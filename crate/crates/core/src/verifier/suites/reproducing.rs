use num_complex::Complex64;
use statrs::function::gamma::{gamma, gamma_lr, gamma_ur};

use super::super::{Context, Curve, Tolerance, VerdictReport};
use crate::calculus::{apply_multipliers, FractionalOrder, GridFunction, Spectral, TimeGrid};
use crate::regularity::square_function_gbeta;
use crate::testfns::random_smooth;
use crate::Result;

const ISOMETRY_TOL: f64 = 0.01;
const RECONSTRUCTION_TOL: f64 = 1e-3;
const REPRODUCING_BETAS: [f64; 3] = [0.5, 1.0, 1.7];
const RECONSTRUCTION_TIMES: usize = 400;

/// `Γ(2β)/4^β = ∫_0^∞ t^{2β} λ^β e^{-2t√λ} dt/t`.
pub(crate) fn isometry_constant(beta: f64) -> f64 {
    gamma(2.0 * beta) / 4f64.powf(beta)
}

/// `∫ t^{2β} λ^β e^{-2t√λ} dt/t` per eigenvalue: trapezoid in `log t` over
/// `times` plus the exact incomplete-gamma tails on both sides.
fn reconstruction_weights(spec: &dyn Spectral, beta: f64, times: &TimeGrid) -> Vec<f64> {
    let w = times.trapezoid_weights();
    let c = isometry_constant(beta);
    spec.eigenvalues()
        .iter()
        .map(|&l| {
            let a = l.sqrt();
            let body: f64 = times
                .points()
                .iter()
                .zip(&w)
                .map(|(t, wt)| wt * (t * a).powf(2.0 * beta) * (-2.0 * t * a).exp())
                .sum();
            let lower = c * gamma_lr(2.0 * beta, 2.0 * times.t_min() * a);
            let upper = c * gamma_ur(2.0 * beta, 2.0 * times.t_max() * a);
            body + lower + upper
        })
        .collect()
}

/// The isometry constant of `g_β` and the reproducing formula with and
/// without the squared phase `e^{2iπβ}`.
pub fn verify_reproducing(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let grid = ctx.grid(cfg.grid_n)?;
    let spec = ctx.spectrum(&grid, &cfg.potential)?;
    let spec = spec.as_ref();
    let tgrid = ctx.time_grid(&grid)?;
    let probes: Vec<GridFunction> = (0..cfg.probes as u64)
        .map(|i| random_smooth(&grid, cfg.seed.wrapping_add(i), grid.len() / 8))
        .collect::<Result<_>>()?;
    let mut betas: Vec<f64> = REPRODUCING_BETAS.iter().chain(&cfg.betas).copied().collect();
    betas.sort_by(f64::total_cmp);
    betas.dedup();

    let a_min = spec.lambda_min().sqrt();
    let a_max = spec.lambda_max().sqrt();
    let recon_times = TimeGrid::log_uniform(1e-4 / a_max, 40.0 / a_min, RECONSTRUCTION_TIMES)?;

    let mut report = ctx.report("reproducing");
    let mut curve = Curve::new(
        "reproducing",
        &[
            "beta",
            "isometry_ratio",
            "gamma_2beta_over_4beta",
            "error_without_phase",
            "error_with_phase",
        ],
    );
    for beta in betas {
        let order = FractionalOrder::new(beta)?;
        let c = isometry_constant(beta);
        let mut worst_ratio: f64 = 0.0;
        let mut mean_ratio = 0.0;
        for f in &probes {
            let g = square_function_gbeta(spec, beta, f, &tgrid)?;
            let ratio = g.l2_norm().powi(2) / f.l2_norm().powi(2);
            mean_ratio += ratio / probes.len() as f64;
            worst_ratio = worst_ratio.max((ratio / c - 1.0).abs());
        }
        report.check(
            format!("g_beta isometry beta={beta}: |ratio / (Gamma(2 beta)/4^beta) - 1|"),
            worst_ratio,
            Tolerance::AtMost {
                bound: ctx.tol(ISOMETRY_TOL),
            },
        );
        report.info(
            format!("g_beta isometry beta={beta}: ratio / Gamma(beta)^2"),
            mean_ratio / gamma(beta).powi(2),
            Tolerance::Within { lo: 0.99, hi: 1.01 },
        );

        let weights = reconstruction_weights(spec, beta, &recon_times);
        let scale = 1.0 / c;
        let phase = order.phase() * order.phase();
        let plain: Vec<Complex64> = weights.iter().map(|w| Complex64::new(w * scale, 0.0)).collect();
        let phased: Vec<Complex64> = plain.iter().map(|m| m * phase).collect();
        let mut err_plain: f64 = 0.0;
        let mut err_phased: f64 = 0.0;
        for f in &probes {
            err_plain = err_plain.max(apply_multipliers(spec, &plain, f)?.max_abs_diff(f)?);
            err_phased = err_phased.max(apply_multipliers(spec, &phased, f)?.max_abs_diff(f)?);
        }
        report.info(
            format!("reconstruction beta={beta} without phase, max-abs error"),
            err_plain,
            Tolerance::AtMost {
                bound: RECONSTRUCTION_TOL,
            },
        );
        report.info(
            format!("reconstruction beta={beta} with phase exp(2 i pi beta), max-abs error"),
            err_phased,
            Tolerance::AtMost {
                bound: RECONSTRUCTION_TOL,
            },
        );
        report.check(
            format!("reconstruction beta={beta}, better normalization"),
            err_plain.min(err_phased),
            Tolerance::AtMost {
                bound: ctx.tol(RECONSTRUCTION_TOL),
            },
        );
        curve.push(vec![beta, mean_ratio, c, err_plain, err_phased]);
    }
    report.curve(curve);
    Ok(report)
}
