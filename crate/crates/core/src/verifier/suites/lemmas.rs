use num_complex::Complex64;

use super::super::{Context, Curve, Tolerance, VerdictReport};
use super::ratio_band;
use crate::calculus::{FourierSpectrum, FractionalOrder, GridFunction, SpacetimeField, Spectral, TimeGrid};
use crate::lattice::CriticalRadiusField;
use crate::regularity::{
    all_offsets, growth_profile, poisson_derivative_field, rho_growth_seminorm, second_difference_constant,
    sup_growth_constant, sup_growth_constant_streaming,
};
use crate::testfns::holder_cusp;
use crate::Result;

const ORDER_PAIRS: [(f64, f64); 2] = [(1.0, 2.0), (0.7, 1.3)];
const DECAY_ORDERS: [f64; 2] = [1.0, 2.0];
const GROUND_MODE_TOL: f64 = 1e-10;

/// Lemma 5.6: growth constants for two derivative orders are comparable.
pub fn verify_growth_order_independence(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let grid = ctx.grid(cfg.grid_n)?;
    let spec = ctx.spectrum(&grid, &cfg.potential)?;
    let tgrid = ctx.time_grid(&grid)?;
    let (lo, hi) = ctx.band();
    let mut report = ctx.report("lemma56");
    let mut curve = Curve::new("lemma56", &["alpha", "beta", "sigma", "c1_beta", "c1_sigma"]);
    for &alpha in &cfg.alphas {
        let f = holder_cusp(&grid, alpha)?;
        for (b, s) in ORDER_PAIRS.into_iter().filter(|(b, s)| *b > alpha && *s > alpha) {
            let cb = sup_growth_constant_streaming(spec.as_ref(), &FractionalOrder::new(b)?, &f, &tgrid, alpha)?;
            let cs = sup_growth_constant_streaming(spec.as_ref(), &FractionalOrder::new(s)?, &f, &tgrid, alpha)?;
            report.check(
                format!("alpha={alpha}: c1(beta={b}) / c1(beta={s})"),
                cb / cs,
                Tolerance::Within { lo, hi },
            );
            curve.push(vec![alpha, b, s, cb, cs]);
        }
        let zero = GridFunction::zeros(&grid);
        let z = sup_growth_constant_streaming(spec.as_ref(), &FractionalOrder::new(2.0)?, &zero, &tgrid, alpha)?;
        report.check(
            format!("alpha={alpha}: zero input growth constant"),
            z,
            Tolerance::AtMost { bound: 0.0 },
        );
    }
    report.curve(curve);
    Ok(report)
}

/// `sup_t t^{-α} sup_x |F_a - F_b|` for two fields on the same grid and times.
fn difference_constant(a: &SpacetimeField, b: &SpacetimeField, alpha: f64) -> f64 {
    a.times()
        .points()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let d = a
                .at_time(i)
                .iter()
                .zip(b.at_time(i))
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            d / t.powf(alpha)
        })
        .fold(0.0, f64::max)
}

/// Proposition 5.5 and Lemma 5.7 under `V ≡ μ`: second differences, the
/// `L`-Poisson and classical Poisson growth constants, and their difference.
pub fn verify_zygmund_equivalence(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let grid = ctx.grid(cfg.grid_n)?;
    let spec = ctx.spectrum(&grid, &ctx.constant_potential())?;
    let rho = ctx.rho(&grid, &ctx.constant_potential())?;
    let free = FourierSpectrum::free(&grid);
    let tgrid = ctx.time_grid(&grid)?;
    let (lo, hi) = ctx.band();
    let mut report = ctx.report("zygmund");
    let mut curve = Curve::new(
        "zygmund",
        &[
            "alpha",
            "beta",
            "second_difference",
            "c1_L",
            "c1_classical",
            "c_difference",
        ],
    );
    for &alpha in &cfg.alphas {
        let Some(&beta) = cfg.betas.iter().find(|&&b| b > alpha) else {
            continue;
        };
        let order = FractionalOrder::new(beta)?;
        let f = holder_cusp(&grid, alpha)?;
        let tag = format!("alpha={alpha} beta={beta}");
        report.check(
            format!("{tag}: growth seminorm |f| <= C rho^alpha"),
            rho_growth_seminorm(&f, alpha, &rho)?,
            Tolerance::Finite,
        );
        let second = second_difference_constant(&f, alpha, &all_offsets(grid.len()))?;
        let field_l = poisson_derivative_field(spec.as_ref(), &order, &f, &tgrid)?;
        let field_c = poisson_derivative_field(&free, &order, &f, &tgrid)?;
        let c_l = sup_growth_constant(&field_l, alpha)?;
        let c_c = sup_growth_constant(&field_c, alpha)?;
        let c_d = difference_constant(&field_l, &field_c, alpha);
        let (rmin, rmax) = ratio_band(&[second, c_l, c_c]);
        report.check(
            format!("{tag}: smallest pairwise ratio"),
            rmin,
            Tolerance::AtLeast { bound: lo },
        );
        report.check(
            format!("{tag}: largest pairwise ratio"),
            rmax,
            Tolerance::AtMost { bound: hi },
        );
        report.check(
            format!("{tag}: difference field constant over c1_L"),
            c_d / c_l,
            Tolerance::AtMost { bound: hi },
        );
        curve.push(vec![alpha, beta, second, c_l, c_c, c_d]);
    }
    report.curve(curve);
    Ok(report)
}

/// `max_{x,s} |s^β ∂_s^β P_s g(x)| / ((ρ(x)/s)^N (ρ(x)^γ + s^γ))`.
fn decay_constant(
    spec: &dyn Spectral,
    rho: &CriticalRadiusField,
    g: &GridFunction,
    beta: f64,
    gamma: f64,
    n: f64,
    tgrid: &TimeGrid,
) -> Result<f64> {
    let field = poisson_derivative_field(spec, &FractionalOrder::new(beta)?, g, tgrid)?;
    let mut best: f64 = 0.0;
    for (i, &s) in tgrid.points().iter().enumerate() {
        for (x, z) in field.at_time(i).iter().enumerate() {
            let r = rho.values[x];
            let env = (r / s).powf(n) * (r.powf(gamma) + s.powf(gamma));
            best = best.max(z.norm() / env);
        }
    }
    Ok(best)
}

/// Lemma 2.1(ii): decay of `s^β ∂_s^β P_s g` for `|g| <= C ρ^γ`.
pub fn verify_growth_lemma21(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let (coarse, fine) = ctx.grid_pair()?;
    let tgrid = ctx.time_grid(&coarse)?;
    let mut report = ctx.report("lemma21");
    for &gamma in &cfg.alphas {
        for g in [coarse, fine] {
            let rho = ctx.rho(&g, &cfg.potential)?;
            let f = holder_cusp(&g, gamma)?;
            report.info(
                format!("gamma={gamma} N={}: growth seminorm |g| <= C rho^gamma", g.len()),
                rho_growth_seminorm(&f, gamma, &rho)?,
                Tolerance::Finite,
            );
        }
        for &beta in cfg.betas.iter().filter(|&&b| b > gamma) {
            for n in DECAY_ORDERS {
                let c: Vec<f64> = [coarse, fine]
                    .iter()
                    .map(|g| {
                        let spec = ctx.spectrum(g, &cfg.potential)?;
                        let rho = ctx.rho(g, &cfg.potential)?;
                        decay_constant(spec.as_ref(), &rho, &holder_cusp(g, gamma)?, beta, gamma, n, &tgrid)
                    })
                    .collect::<Result<_>>()?;
                report.stable(
                    format!("gamma={gamma} beta={beta} decay order {n}: constant"),
                    c[0],
                    c[1],
                    ctx.stability(),
                );
            }
        }
    }

    // Constant data under V ≡ μ: the field is the ground-mode closed form.
    let spec = ctx.spectrum(&coarse, &ctx.constant_potential())?;
    let one = GridFunction::constant(&coarse, Complex64::new(1.0, 0.0));
    let order = FractionalOrder::new(1.0)?;
    let a = cfg.mu.sqrt();
    let profile = growth_profile(spec.as_ref(), &order, &one, &tgrid)?;
    let dev = tgrid
        .points()
        .iter()
        .zip(&profile)
        .map(|(s, p)| (p - s * a * (-s * a).exp()).abs())
        .fold(0.0, f64::max);
    report.check(
        "constant data under V = mu: |s dP_s 1| against s sqrt(mu) exp(-s sqrt(mu))",
        dev,
        Tolerance::AtMost {
            bound: ctx.tol(GROUND_MODE_TOL),
        },
    );
    let zero = decay_constant(
        spec.as_ref(),
        &*ctx.rho(&coarse, &ctx.constant_potential())?,
        &GridFunction::zeros(&coarse),
        1.0,
        cfg.alphas[0],
        2.0,
        &tgrid,
    )?;
    report.check("zero data decay constant", zero, Tolerance::AtMost { bound: 0.0 });
    Ok(report)
}
