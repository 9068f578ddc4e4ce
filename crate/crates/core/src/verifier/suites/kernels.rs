use nalgebra::DMatrix;
use rayon::prelude::*;

use super::super::{Context, Curve, Tolerance, VerdictReport};
use crate::calculus::{heat_kernel, poisson_kernel, q_kernel, Spectral, TimeGrid};
use crate::lattice::PeriodicGrid;
use crate::{Error, Result};

const POSITIVITY_FLOOR: f64 = -1e-12;
const ROW_SUM_TOL: f64 = 1e-8;
/// The exponent `N` in the `(1 + ·/ρ)^{-N}` factors.
const DECAY_ORDER: f64 = 2.0;
/// Pairs with `d²/(5t)` above this are left out of the Gaussian envelope fit:
/// the envelope there is below the roundoff of the computed kernel.
const GAUSSIAN_CUTOFF: f64 = 20.0;
const KERNEL_TIMES: usize = 8;
const ROW_SUM_TIMES: usize = 16;
const SHAPE_SLOPE_BAND: (f64, f64) = (0.95, 1.05);

/// `max |K_ij| / envelope(d_ij, ρ_i, ρ_j)` over the pairs the envelope admits.
fn envelope_constant(
    k: &DMatrix<f64>,
    grid: &PeriodicGrid,
    rho: &[f64],
    env: impl Fn(f64, f64, f64) -> Option<f64> + Sync,
) -> f64 {
    let n = grid.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: f64 = 0.0;
            for j in 0..n {
                if let Some(e) = env(grid.periodic_distance(i, j), rho[i], rho[j]) {
                    best = best.max(k[(i, j)].abs() / e);
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
}

fn heat_times(coarse: &PeriodicGrid) -> Result<TimeGrid> {
    let lo = (64.0 * coarse.spacing().powi(2)).max(1e-2);
    let hi = (0.25 * coarse.period()).powi(2);
    if !(hi > lo) {
        return Err(Error::Regime(format!(
            "heat times [{lo}, {hi}] are empty; the grid is too coarse for the torus comparison"
        )));
    }
    TimeGrid::log_uniform(lo, hi, KERNEL_TIMES)
}

fn poisson_times(coarse: &PeriodicGrid) -> Result<TimeGrid> {
    let lo = 4.0 * coarse.spacing();
    let hi = 0.25 * coarse.period();
    if !(hi > lo) {
        return Err(Error::Regime(format!(
            "Poisson times [{lo}, {hi}] are empty; the grid is too coarse for the torus comparison"
        )));
    }
    TimeGrid::log_uniform(lo, hi, KERNEL_TIMES)
}

struct Envelopes {
    heat_min: f64,
    heat: f64,
    poisson: f64,
    derivative: Vec<f64>,
}

fn envelopes(
    spec: &dyn Spectral,
    rho: &[f64],
    heat_t: &TimeGrid,
    pois_t: &TimeGrid,
    betas: &[f64],
) -> Result<Envelopes> {
    let grid = *spec.grid();
    let n_exp = DECAY_ORDER;
    let mut heat_min = f64::INFINITY;
    let mut heat: f64 = 0.0;
    for &t in heat_t.points() {
        let k = heat_kernel(spec, t)?;
        heat_min = heat_min.min(k.min());
        let st = t.sqrt();
        heat = heat.max(envelope_constant(&k, &grid, rho, |d, rx, ry| {
            let g = d * d / (5.0 * t);
            (g <= GAUSSIAN_CUTOFF).then(|| (-g).exp() / st * (1.0 + st / rx + st / ry).powf(-n_exp))
        }));
    }
    let mut poisson: f64 = 0.0;
    let mut derivative = vec![0.0f64; betas.len()];
    for &t in pois_t.points() {
        let k = poisson_kernel(spec, t)?;
        poisson = poisson.max(envelope_constant(&k, &grid, rho, |d, rx, ry| {
            let s2 = d * d + t * t;
            let s = s2.sqrt();
            Some(t / s2 * (1.0 + s / rx + s / ry).powf(-n_exp))
        }));
        for (slot, &beta) in derivative.iter_mut().zip(betas) {
            let tb = t.powf(beta);
            let k = spec.kernel(&|l| tb * l.powf(0.5 * beta) * (-t * l.sqrt()).exp())?;
            *slot = slot.max(envelope_constant(&k, &grid, rho, |d, rx, ry| {
                let s2 = d * d + t * t;
                let s = s2.sqrt();
                Some(tb / s2.powf(0.5 * (1.0 + beta)) * (1.0 + s / rx + s / ry).powf(-n_exp))
            }));
        }
    }
    Ok(Envelopes {
        heat_min,
        heat,
        poisson,
        derivative,
    })
}

/// Kernel estimates: positivity, the Gaussian envelope of the heat kernel,
/// the Poisson envelopes and the row sums under `V ≡ μ`.
pub fn verify_kernel_bounds(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let (coarse, fine) = ctx.grid_pair()?;
    let heat_t = heat_times(&coarse)?;
    let pois_t = poisson_times(&coarse)?;
    let mut report = ctx.report("kernels");

    let env: Vec<Envelopes> = [coarse, fine]
        .iter()
        .map(|g| {
            let spec = ctx.spectrum(g, &cfg.potential)?;
            let rho = ctx.rho(g, &cfg.potential)?;
            envelopes(spec.as_ref(), &rho.values, &heat_t, &pois_t, &cfg.betas)
        })
        .collect::<Result<_>>()?;

    let mut heat_min = env[0].heat_min.min(env[1].heat_min);
    let constant = ctx.constant_potential();
    for g in [coarse, fine] {
        let spec = ctx.spectrum(&g, &constant)?;
        for &t in heat_t.points() {
            heat_min = heat_min.min(heat_kernel(spec.as_ref(), t)?.min());
        }
    }
    report.check(
        "heat kernel minimum entry",
        heat_min,
        Tolerance::AtLeast {
            bound: POSITIVITY_FLOOR * cfg.tolerance_scale,
        },
    );
    let s = ctx.stability();
    report.stable("heat kernel Gaussian envelope constant", env[0].heat, env[1].heat, s);
    report.stable("Poisson kernel envelope constant", env[0].poisson, env[1].poisson, s);
    for (i, beta) in cfg.betas.iter().enumerate() {
        report.stable(
            format!("fractional derivative kernel envelope constant beta={beta}"),
            env[0].derivative[i],
            env[1].derivative[i],
            s,
        );
    }

    row_sums(ctx, &coarse, &mut report)?;
    Ok(report)
}

/// Row sums `h Σ_y K(x, y)` under `V ≡ μ` equal the multiplier at the
/// ground eigenvalue `μ`, because constants are eigenfunctions.
fn row_sums(ctx: &Context, grid: &PeriodicGrid, report: &mut VerdictReport) -> Result<()> {
    let cfg = ctx.config();
    let mu = cfg.mu;
    let a = mu.sqrt();
    let spec = ctx.spectrum(grid, &ctx.constant_potential())?;
    let spec = spec.as_ref();
    let rho = ctx.rho(grid, &ctx.constant_potential())?.values[0];
    let h = grid.spacing();
    let times = TimeGrid::log_uniform(1e-3 / a, 10.0 / a, ROW_SUM_TIMES)?;
    let row_dev = |k: &DMatrix<f64>, expect: f64| -> f64 {
        k.row_iter().map(|r| (h * r.sum() - expect).abs()).fold(0.0, f64::max)
    };

    let mut curve = Curve::new("row_sums_constant", &["t", "t_dt_poisson_row_sum", "q_row_sum"]);
    let mut dev_p: f64 = 0.0;
    let mut dev_q: f64 = 0.0;
    let mut shape: f64 = 0.0;
    let mut first = Vec::new();
    for &t in times.points() {
        let kp = spec.kernel(&|l| -t * l.sqrt() * (-t * l.sqrt()).exp())?;
        let expect_p = -t * a * (-t * a).exp();
        dev_p = dev_p.max(row_dev(&kp, expect_p));
        let kq = q_kernel(spec, t)?;
        let expect_q = -t * t * mu * (-t * t * mu).exp();
        dev_q = dev_q.max(row_dev(&kq, expect_q));
        let sum_p = h * kp.row(0).sum();
        let u = t / rho;
        shape = shape.max(sum_p.abs() / (u / (1.0 + u).powf(DECAY_ORDER)));
        if first.len() < 2 {
            first.push((t, sum_p.abs()));
        }
        curve.push(vec![t, sum_p, h * kq.row(0).sum()]);
    }
    let tol = Tolerance::AtMost {
        bound: ctx.tol(ROW_SUM_TOL),
    };
    report.check("row sum of t d/dt P_t against -t sqrt(mu) exp(-t sqrt(mu))", dev_p, tol);
    report.check("row sum of Q_t against -t^2 mu exp(-t^2 mu)", dev_q, tol);
    for beta in &cfg.betas {
        let mut dev: f64 = 0.0;
        for &t in times.points() {
            let tb = t.powf(*beta);
            let k = spec.kernel(&|l| tb * l.powf(0.5 * beta) * (-t * l.sqrt()).exp())?;
            dev = dev.max(row_dev(&k, (t * a).powf(*beta) * (-t * a).exp()));
        }
        report.check(
            format!("row sum modulus beta={beta} against (t sqrt(mu))^beta exp(-t sqrt(mu))"),
            dev,
            tol,
        );
    }
    report.check("row-sum shape constant (delta' = 1)", shape, Tolerance::Finite);
    let slope = (first[1].1 / first[0].1).ln() / (first[1].0 / first[0].0).ln();
    report.check(
        "small-t log-log slope of the row sum",
        slope,
        Tolerance::Within {
            lo: SHAPE_SLOPE_BAND.0,
            hi: SHAPE_SLOPE_BAND.1,
        },
    );
    report.curve(curve);
    Ok(())
}
