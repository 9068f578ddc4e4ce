use rayon::prelude::*;

use super::super::{Context, Curve, Tolerance, VerdictReport};
use super::ratio_band;
use crate::calculus::{FractionalOrder, GridFunction, Spectral, TimeGrid};
use crate::lattice::{BallFamily, CriticalRadiusField};
use crate::regularity::{carleson_functional, holder_report, poisson_derivative_field, sup_growth_constant};
use crate::testfns::holder_cusp;
use crate::{Error, Result};

/// `(‖f‖_{C_L^{0,α}}, c_{1,β}, [dμ_f]_{α,β})` on one grid.
pub(crate) fn triple(
    spec: &dyn Spectral,
    rho: &CriticalRadiusField,
    f: &GridFunction,
    alpha: f64,
    beta: f64,
    tgrid: &TimeGrid,
    balls: &BallFamily,
) -> Result<[f64; 3]> {
    let norm = holder_report(f, alpha, rho)?.total;
    let field = poisson_derivative_field(spec, &FractionalOrder::new(beta)?, f, tgrid)?;
    let c1 = sup_growth_constant(&field, alpha)?;
    let c2 = carleson_functional(&field, alpha, beta, balls)?.supremum;
    Ok([norm, c1, c2])
}

const NAMES: [&str; 3] = ["Hoelder norm", "c1 (Poisson growth)", "c2 (Carleson)"];

/// Comparability of the three constants on the cusp family and their
/// stability under one grid doubling.
pub fn verify_thm13(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let pairs: Vec<(f64, f64)> = cfg
        .alphas
        .iter()
        .flat_map(|&a| cfg.betas.iter().map(move |&b| (a, b)))
        .collect();
    if let Some((a, b)) = pairs.iter().find(|(a, b)| !(b > a)) {
        return Err(Error::InvalidArgument(format!(
            "Theorem 1.3 needs β > α, got β = {b}, α = {a}"
        )));
    }
    let (coarse, fine) = ctx.grid_pair()?;
    let tgrid = ctx.time_grid(&coarse)?;
    let grids = [coarse, fine];
    let balls: Vec<BallFamily> = grids
        .iter()
        .map(|g| ctx.tent_balls(&coarse, g))
        .collect::<Result<_>>()?;
    for g in &grids {
        ctx.spectrum(g, &cfg.potential)?;
        ctx.rho(g, &cfg.potential)?;
    }

    let results: Vec<[[f64; 3]; 2]> = pairs
        .par_iter()
        .map(|&(alpha, beta)| -> Result<[[f64; 3]; 2]> {
            let mut out = [[0.0; 3]; 2];
            for (k, g) in grids.iter().enumerate() {
                let spec = ctx.spectrum(g, &cfg.potential)?;
                let rho = ctx.rho(g, &cfg.potential)?;
                let f = holder_cusp(g, alpha)?;
                out[k] = triple(spec.as_ref(), &rho, &f, alpha, beta, &tgrid, &balls[k])?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut report = ctx.report("thm13");
    let (lo, hi) = ctx.band();
    let mut curve = Curve::new(
        "thm13_constants",
        &["alpha", "beta", "norm_n", "c1_n", "c2_n", "norm_2n", "c1_2n", "c2_2n"],
    );
    for (&(alpha, beta), [a, b]) in pairs.iter().zip(&results) {
        let tag = format!("alpha={alpha} beta={beta}");
        for i in 0..3 {
            report.stable(format!("{tag} {}", NAMES[i]), a[i], b[i], ctx.stability());
        }
        for (k, vals) in [a, b].iter().enumerate() {
            let (rmin, rmax) = ratio_band(&vals[..]);
            let res = if k == 0 { "N" } else { "2N" };
            report.check(
                format!("{tag} smallest pairwise ratio at {res}"),
                rmin,
                Tolerance::AtLeast { bound: lo },
            );
            report.check(
                format!("{tag} largest pairwise ratio at {res}"),
                rmax,
                Tolerance::AtMost { bound: hi },
            );
        }
        curve.push(vec![alpha, beta, a[0], a[1], a[2], b[0], b[1], b[2]]);
    }

    // Homogeneity: scaling f scales all three constants alike.
    let (alpha, beta) = pairs[0];
    let spec = ctx.spectrum(&coarse, &cfg.potential)?;
    let rho = ctx.rho(&coarse, &cfg.potential)?;
    let f = holder_cusp(&coarse, alpha)?;
    let base = results[0][0];
    let scaled = triple(
        spec.as_ref(),
        &rho,
        &f.scale((3.0).into()),
        alpha,
        beta,
        &tgrid,
        &balls[0],
    )?;
    let dev = (0..3)
        .map(|i| (scaled[i] / (3.0 * base[i]) - 1.0).abs())
        .fold(0.0, f64::max);
    report.check("homogeneity under f -> 3f", dev, Tolerance::AtMost { bound: 1e-10 });
    let zero = triple(
        spec.as_ref(),
        &rho,
        &GridFunction::zeros(&coarse),
        alpha,
        beta,
        &tgrid,
        &balls[0],
    )?;
    report.check(
        "zero input, largest constant",
        zero.iter().fold(0.0, |m: f64, v| m.max(*v)),
        Tolerance::AtMost { bound: 0.0 },
    );
    report.curve(curve);
    Ok(report)
}
