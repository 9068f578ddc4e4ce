use num_complex::Complex64;

use super::super::{Context, Curve, Tolerance, VerdictReport};
use super::least_squares;
use crate::calculus::{
    frac_deriv_poisson_spectral, FourierSpectrum, FractionalOrder, GridFunction, Spectral, TimeGrid,
};
use crate::lattice::PeriodicGrid;
use crate::regularity::{bmo_alpha_norm, carleson_functional, poisson_derivative_field};
use crate::testfns::{log_bump, random_smooth};
use crate::{Error, Result};

const FIT_WINDOW: (f64, f64) = (1e-3, 1e-1);
const FIT_POINTS: usize = 21;
/// Grid spacing needed below the smallest fitted time.
const RESOLUTION_MARGIN: f64 = 0.1;
const RESOLUTIONS: usize = 3;
const RANDOM_CUTOFF: usize = 8;

fn family(grid: &PeriodicGrid, seed: u64) -> Result<Vec<(&'static str, GridFunction)>> {
    Ok(vec![
        ("constant", GridFunction::constant(grid, Complex64::new(1.0, 0.0))),
        ("log_bump", log_bump(grid)?),
        ("random_smooth", random_smooth(grid, seed, RANDOM_CUTOFF)?),
    ])
}

/// `|t ∂_t P_t f(0)|` at each time.
fn origin_profile(spec: &dyn Spectral, f: &GridFunction, times: &TimeGrid) -> Result<Vec<f64>> {
    let order = FractionalOrder::new(1.0)?;
    let o = spec.grid().origin_index();
    times
        .points()
        .iter()
        .map(|&t| Ok(t * frac_deriv_poisson_spectral(spec, &order, t, f)?.samples()[o].norm()))
        .collect()
}

/// The `α = 0` endpoint under `V ≡ μ`: Carleson against `BMO_L` on a small
/// family, and the behaviour of `t ∂_t P_t` of the logarithmic bump at the
/// origin as `t → 0`.
pub fn verify_thm15(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    if cfg.period < 4.0 {
        return Err(Error::Unresolvable(format!(
            "the logarithmic bump needs period at least 4, got {}",
            cfg.period
        )));
    }
    let beta = cfg.betas[0];
    let order = FractionalOrder::new(beta)?;
    let (coarse, fine) = ctx.grid_pair()?;
    let tgrid = ctx.time_grid(&coarse)?;
    let constant = ctx.constant_potential();
    let mut report = ctx.report("thm15");

    let mut worst = [0.0f64; 2];
    for (k, g) in [coarse, fine].iter().enumerate() {
        let spec = ctx.spectrum(g, &constant)?;
        let rho = ctx.rho(g, &constant)?;
        let balls = ctx.tent_balls(&coarse, g)?;
        for (name, f) in family(g, cfg.seed)? {
            let field = poisson_derivative_field(spec.as_ref(), &order, &f, &tgrid)?;
            let carleson = carleson_functional(&field, 0.0, beta, &balls)?.supremum;
            let bmo = bmo_alpha_norm(&f, 0.0, &balls, &rho)?;
            let ratio = carleson / bmo;
            if k == 0 {
                report.check(
                    format!("{name}: Carleson (alpha = 0) / BMO_L norm"),
                    ratio,
                    Tolerance::Finite,
                );
            }
            worst[k] = worst[k].max(ratio);
        }
    }
    report.stable(
        format!("common constant C, Carleson <= C BMO_L (beta = {beta})"),
        worst[0],
        worst[1],
        ctx.stability(),
    );

    // Pointwise behaviour of the bump, on grids fine enough to resolve t = 1e-3.
    let times = TimeGrid::log_uniform(FIT_WINDOW.0, FIT_WINDOW.1, FIT_POINTS)?;
    let need = (cfg.period / (RESOLUTION_MARGIN * FIT_WINDOW.0)).ceil() as usize;
    let base = need.next_power_of_two().max(cfg.grid_n);
    let logs: Vec<f64> = times.points().iter().map(|t| (1.0 / t).ln()).collect();
    let mut slopes = Vec::new();
    let mut curve = Curve::new("thm15_log_bump_origin", &["t", "n", "abs_t_dt_poisson_at_0"]);
    for r in 0..RESOLUTIONS {
        let grid = PeriodicGrid::new(base << r, cfg.period)?;
        let spec = FourierSpectrum::constant(&grid, cfg.mu)?;
        let profile = origin_profile(&spec, &log_bump(&grid)?, &times)?;
        let (_, slope) = least_squares(&logs, &profile);
        slopes.push(slope);
        // Times ascend, so growth as t decreases means a descending profile.
        let monotone = profile.windows(2).all(|w| w[0] > w[1]);
        report.check(
            format!("log_bump N={}: |t dP_t f(0)| increases as t decreases", grid.len()),
            if monotone { 1.0 } else { 0.0 },
            Tolerance::AtLeast { bound: 1.0 },
        );
        report.info(
            format!("log_bump N={}: fitted slope against log(1/t)", grid.len()),
            slope,
            Tolerance::Finite,
        );
        report.info(
            format!("log_bump N={}: value at t = {}", grid.len(), FIT_WINDOW.0),
            profile[0],
            Tolerance::Finite,
        );
        for (t, v) in times.points().iter().zip(&profile) {
            curve.push(vec![*t, grid.len() as f64, *v]);
        }
    }
    report.stable(
        "log(1/t) slope under grid doubling",
        slopes[0],
        slopes[1],
        ctx.stability(),
    );
    report.info(
        "log(1/t) slope under a second doubling, ratio",
        super::super::refinement_ratio(slopes[1], slopes[2]),
        Tolerance::Within {
            lo: 1.0 - ctx.stability(),
            hi: 1.0 + ctx.stability(),
        },
    );
    report.curve(curve);
    Ok(report)
}
