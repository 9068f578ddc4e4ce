use num_complex::Complex64;

use super::tent::poisson_derivative_field;
use crate::calculus::{FractionalOrder, GridFunction, SpacetimeField, Spectral, TimeGrid};
use crate::{Error, Result};

/// `∫_0^∞ q(t) dt/t` from samples `q_i = q(t_i)` on a log-uniform grid:
/// trapezoid, a power-law tail below `t_0` and an exponential tail above
/// `t_{M-1}` with rate `2√λ_0`.
fn integrate_dt_over_t(tgrid: &TimeGrid, q: &[f64], beta: f64, root_lambda0: f64, weights: &[f64]) -> f64 {
    let body: f64 = q.iter().zip(weights).map(|(a, w)| a * w).sum();
    // Near t = 0, q ~ t^p; the local exponent comes from the first two samples.
    let p = if q[0] > 0.0 && q[1] > 0.0 {
        (q[1] / q[0]).ln() / tgrid.log_step()
    } else {
        f64::NAN
    };
    let p = if p.is_finite() && p > 0.0 { p } else { 2.0 * beta };
    let lower = q[0] / p;
    let last = q.len() - 1;
    let upper = if root_lambda0 > 0.0 {
        q[last] / (2.0 * tgrid.t_max() * root_lambda0)
    } else {
        0.0
    };
    body + lower + upper
}

fn check_beta(beta: f64) -> Result<FractionalOrder> {
    FractionalOrder::new(beta).map_err(|_| Error::InvalidArgument(format!("square functions need β > 0, got {beta}")))
}

/// `g_β f (x) = ( ∫_0^∞ |t^β ∂_t^β P_t f(x)|² dt/t )^{1/2}` from a stored
/// field; `root_lambda0 = √λ_0` drives the large-time tail.
pub fn square_function_from_field(field: &SpacetimeField, root_lambda0: f64) -> Result<GridFunction> {
    let beta = field.order();
    let tgrid = field.times();
    let weights = tgrid.trapezoid_weights();
    let n = field.grid().len();
    let samples = (0..n)
        .map(|x| {
            let q: Vec<f64> = (0..tgrid.len()).map(|i| field.value(x, i).norm_sqr()).collect();
            Complex64::new(integrate_dt_over_t(tgrid, &q, beta, root_lambda0, &weights).sqrt(), 0.0)
        })
        .collect();
    GridFunction::new(field.grid(), samples)
}

pub fn square_function_gbeta(
    spec: &dyn Spectral,
    beta: f64,
    f: &GridFunction,
    tgrid: &TimeGrid,
) -> Result<GridFunction> {
    let order = check_beta(beta)?;
    let field = poisson_derivative_field(spec, &order, f, tgrid)?;
    square_function_from_field(&field, spec.lambda_min().max(0.0).sqrt())
}

/// Area function over the aperture-one cone `{(y, t) : dist(z, y) < t}`.
///
/// The space integral at height `t` is the average over the nodes of the
/// discrete cone section, so that `‖S_β f‖₂ = ‖g_β f‖₂` holds on the grid.
pub fn area_function_from_field(field: &SpacetimeField, root_lambda0: f64) -> Result<GridFunction> {
    let grid = *field.grid();
    let n = grid.len();
    let tgrid = field.times();
    let weights = tgrid.trapezoid_weights();
    let h = grid.spacing();
    // cone[i][z]: mean of |F(y, t_i)|² over the cone section at z.
    let mut cone = vec![vec![0.0; n]; tgrid.len()];
    for (i, &t) in tgrid.points().iter().enumerate() {
        let slice: Vec<f64> = field.at_time(i).iter().map(|z| z.norm_sqr()).collect();
        // Largest index offset d with d·h < t.
        let reach = ((t / h).ceil() as usize).saturating_sub(1);
        if 2 * reach + 1 >= n {
            let mean = slice.iter().sum::<f64>() / n as f64;
            cone[i].iter_mut().for_each(|c| *c = mean);
            continue;
        }
        let mut prefix = vec![0.0; 3 * n + 1];
        for k in 0..3 * n {
            prefix[k + 1] = prefix[k] + slice[k % n];
        }
        let count = (2 * reach + 1) as f64;
        for (z, c) in cone[i].iter_mut().enumerate() {
            let lo = z + n - reach;
            *c = (prefix[lo + 2 * reach + 1] - prefix[lo]) / count;
        }
    }
    let samples = (0..n)
        .map(|z| {
            let q: Vec<f64> = cone.iter().map(|row| row[z]).collect();
            Complex64::new(
                integrate_dt_over_t(tgrid, &q, field.order(), root_lambda0, &weights).sqrt(),
                0.0,
            )
        })
        .collect();
    GridFunction::new(&grid, samples)
}

pub fn area_function_sbeta(spec: &dyn Spectral, beta: f64, f: &GridFunction, tgrid: &TimeGrid) -> Result<GridFunction> {
    let order = check_beta(beta)?;
    let field = poisson_derivative_field(spec, &order, f, tgrid)?;
    area_function_from_field(&field, spec.lambda_min().max(0.0).sqrt())
}
