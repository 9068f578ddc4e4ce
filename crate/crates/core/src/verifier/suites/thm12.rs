use rayon::prelude::*;

use super::super::{Context, Curve, Tolerance, VerdictReport};
use crate::calculus::{frac_power_neg, frac_power_pos, laplace_multiplier, GridFunction, MultiplierProfile, Spectral};
use crate::lattice::CriticalRadiusField;
use crate::regularity::holder_report;
use crate::testfns::holder_cusp;
use crate::{Error, Result};

const POWER_POINTS: usize = 256;
const MULTIPLIER_ORDER: usize = 16;
const IDENTITY_TOL: f64 = 1e-6;

fn profiles() -> Vec<(&'static str, MultiplierProfile)> {
    vec![
        ("indicator", MultiplierProfile::Indicator { end: 1.0 }),
        (
            "oscillating",
            MultiplierProfile::Cosine {
                omega: 2.0 * std::f64::consts::PI,
            },
        ),
    ]
}

fn norm(f: &GridFunction, exponent: f64, rho: &CriticalRadiusField) -> Result<f64> {
    Ok(holder_report(f, exponent, rho)?.total)
}

/// Operator-norm ratios for one input on one grid, in a fixed order:
/// (a) if admissible, (b) if admissible, then one per multiplier profile.
fn ratios(
    spec: &dyn Spectral,
    rho: &CriticalRadiusField,
    f: &GridFunction,
    alpha: f64,
    sigma: f64,
) -> Result<Vec<(String, f64)>> {
    let base = norm(f, alpha, rho)?;
    let ratio = |v: f64| if base == 0.0 { 0.0 } else { v / base };
    let mut out = Vec::new();
    if alpha + sigma < 1.0 {
        let g = frac_power_neg(spec, sigma, f, POWER_POINTS)?;
        out.push((
            format!("L^(-sigma/2) alpha={alpha} sigma={sigma}"),
            ratio(norm(&g, alpha + sigma, rho)?),
        ));
    }
    if sigma < alpha {
        let g = frac_power_pos(spec, sigma, f, POWER_POINTS)?;
        out.push((
            format!("L^(sigma/2) alpha={alpha} sigma={sigma}"),
            ratio(norm(&g, alpha - sigma, rho)?),
        ));
    }
    for (name, a) in profiles() {
        let g = laplace_multiplier(spec, &a, f, MULTIPLIER_ORDER)?;
        out.push((format!("m(L) {name} alpha={alpha}"), ratio(norm(&g, alpha, rho)?)));
    }
    Ok(out)
}

/// Boundedness of `L^{-σ/2}`, `L^{σ/2}` and Laplace-type multipliers on the
/// Hölder cusp family, as empirical norm ratios under one grid doubling.
pub fn verify_thm12(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let (coarse, fine) = ctx.grid_pair()?;
    let mut report = ctx.report("thm12");
    let mut curve = Curve::new("thm12_ratios", &["alpha", "sigma", "index", "ratio_n", "ratio_2n"]);
    for &sigma in &cfg.sigmas {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::InvalidArgument(format!("σ must lie in (0, 1), got {sigma}")));
        }
        let per_alpha: Vec<[Vec<(String, f64)>; 2]> = cfg
            .alphas
            .par_iter()
            .map(|&alpha| -> Result<[Vec<(String, f64)>; 2]> {
                let run = |g| -> Result<Vec<(String, f64)>> {
                    let spec = ctx.spectrum(g, &cfg.potential)?;
                    let rho = ctx.rho(g, &cfg.potential)?;
                    ratios(spec.as_ref(), &rho, &holder_cusp(g, alpha)?, alpha, sigma)
                };
                Ok([run(&coarse)?, run(&fine)?])
            })
            .collect::<Result<_>>()?;
        for (alpha, [a, b]) in cfg.alphas.iter().zip(&per_alpha) {
            for (i, ((name, r1), (_, r2))) in a.iter().zip(b).enumerate() {
                report.stable(format!("norm ratio {name}"), *r1, *r2, ctx.stability());
                curve.push(vec![*alpha, sigma, i as f64, *r1, *r2]);
            }
        }
    }

    let spec = ctx.spectrum(&coarse, &cfg.potential)?;
    let rho = ctx.rho(&coarse, &cfg.potential)?;
    let mut worst: f64 = 0.0;
    for &alpha in &cfg.alphas {
        let f = holder_cusp(&coarse, alpha)?;
        let g = laplace_multiplier(spec.as_ref(), &MultiplierProfile::Constant(1.0), &f, MULTIPLIER_ORDER)?;
        worst = worst.max(g.max_abs_diff(&f)?);
        let zero = GridFunction::zeros(&coarse);
        for (name, r) in ratios(spec.as_ref(), &rho, &zero, alpha, cfg.sigmas[0])? {
            report.check(format!("zero input: {name}"), r, Tolerance::AtMost { bound: 0.0 });
        }
    }
    report.check(
        "identity multiplier a = 1, max-abs deviation from f",
        worst,
        Tolerance::AtMost {
            bound: ctx.tol(IDENTITY_TOL),
        },
    );
    report.curve(curve);
    Ok(report)
}
