use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::{frac_deriv_multiplier, FractionalOrder, GridFunction, SpacetimeField, Spectral, TimeGrid};
use crate::lattice::{Ball, BallFamily};
use crate::{Error, Result};

/// `F(x, t) = t^β ∂_t^β P_t f(x)` on every time of `tgrid`.
pub fn poisson_derivative_field(
    spec: &dyn Spectral,
    order: &FractionalOrder,
    f: &GridFunction,
    tgrid: &TimeGrid,
) -> Result<SpacetimeField> {
    let coeffs = spec.analyze(f)?;
    let slices: Vec<GridFunction> = tgrid
        .points()
        .par_iter()
        .map(|&t| synthesize_at(spec, order, &coeffs, t))
        .collect();
    let values = slices.into_iter().flat_map(GridFunction::into_samples).collect();
    SpacetimeField::new(spec.grid(), tgrid, order.beta(), values)
}

fn synthesize_at(spec: &dyn Spectral, order: &FractionalOrder, coeffs: &[Complex64], t: f64) -> GridFunction {
    let tb = t.powf(order.beta());
    let scaled: Vec<Complex64> = coeffs
        .iter()
        .zip(spec.eigenvalues())
        .map(|(c, &l)| c * frac_deriv_multiplier(order, t, l) * tb)
        .collect();
    spec.synthesize(&scaled)
}

/// `sup_x |t^β ∂_t^β P_t f(x)|` at each time, without storing the field.
pub fn growth_profile(
    spec: &dyn Spectral,
    order: &FractionalOrder,
    f: &GridFunction,
    tgrid: &TimeGrid,
) -> Result<Vec<f64>> {
    let coeffs = spec.analyze(f)?;
    Ok(tgrid
        .points()
        .par_iter()
        .map(|&t| synthesize_at(spec, order, &coeffs, t).sup_norm())
        .collect())
}

/// `max_i t_i^{-α} profile_i` and the attaining time index.
pub fn growth_constant_from_profile(tgrid: &TimeGrid, profile: &[f64], alpha: f64) -> (f64, usize) {
    tgrid
        .points()
        .iter()
        .zip(profile)
        .enumerate()
        .map(|(i, (t, p))| (p / t.powf(alpha), i))
        .fold((0.0, 0), |acc, x| if x.0 > acc.0 { x } else { acc })
}

fn check_orders(order: f64, alpha: f64) -> Result<()> {
    if !(order > alpha) {
        return Err(Error::InvalidArgument(format!(
            "derivative order {order} must exceed the exponent {alpha}"
        )));
    }
    Ok(())
}

/// Empirical `c_{1,β} = max_t t^{-α} max_x |F(x, t)|`.
pub fn sup_growth_constant(field: &SpacetimeField, alpha: f64) -> Result<f64> {
    check_orders(field.order(), alpha)?;
    let profile: Vec<f64> = (0..field.times().len())
        .map(|i| field.at_time(i).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .collect();
    Ok(growth_constant_from_profile(field.times(), &profile, alpha).0)
}

/// Streaming form of [`sup_growth_constant`] for grids where the full field
/// does not fit in memory.
pub fn sup_growth_constant_streaming(
    spec: &dyn Spectral,
    order: &FractionalOrder,
    f: &GridFunction,
    tgrid: &TimeGrid,
    alpha: f64,
) -> Result<f64> {
    check_orders(order.beta(), alpha)?;
    let profile = growth_profile(spec, order, f, tgrid)?;
    Ok(growth_constant_from_profile(tgrid, &profile, alpha).0)
}

/// Tent functional per ball and its supremum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlesonReport {
    pub alpha: f64,
    pub beta: f64,
    /// `None` where the tent holds no time sample (`r < t_min`).
    pub per_ball: Vec<Option<f64>>,
    pub supremum: f64,
    pub attaining_ball: Option<Ball>,
    pub skipped: usize,
}

/// `( |B|⁻¹ Σ_{x∈B} Σ_{t_i <= r} |F(x, t_i)|² h Δlog t )^{1/2} / |B|^α` per
/// ball, with midpoint-rule cell weights standing in for `h`.
pub fn carleson_functional(
    field: &SpacetimeField,
    alpha: f64,
    beta: f64,
    balls: &BallFamily,
) -> Result<CarlesonReport> {
    if (field.order() - beta).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "field holds order {} but β = {beta} was requested",
            field.order()
        )));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "Carleson exponent must lie in [0, 1], got {alpha}"
        )));
    }
    let grid = *field.grid();
    let n = grid.len();
    let times = field.times();
    let step = times.log_step();
    // Running sums over time of |F|² Δlog t, per node.
    let mut cumulative = vec![0.0; n * times.len()];
    for i in 0..times.len() {
        for (x, z) in field.at_time(i).iter().enumerate() {
            let prev = if i == 0 { 0.0 } else { cumulative[(i - 1) * n + x] };
            cumulative[i * n + x] = prev + z.norm_sqr() * step;
        }
    }
    let per_ball = balls
        .balls()
        .par_iter()
        .map(|ball| -> Result<Option<f64>> {
            let depth = times.points().partition_point(|&t| t <= ball.radius);
            if depth == 0 {
                return Ok(None);
            }
            let row = &cumulative[(depth - 1) * n..depth * n];
            let cells = ball.cells(&grid)?;
            let measure = ball.measure();
            let mass: f64 = cells.iter().map(|&(j, w)| w * row[j]).sum();
            Ok(Some((mass / measure).sqrt() / measure.powf(alpha)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut supremum = 0.0;
    let mut attaining_ball = None;
    for (ball, v) in balls.balls().iter().zip(&per_ball) {
        if let Some(v) = v {
            if attaining_ball.is_none() || *v > supremum {
                supremum = *v;
                attaining_ball = Some(*ball);
            }
        }
    }
    let skipped = per_ball.iter().filter(|v| v.is_none()).count();
    Ok(CarlesonReport {
        alpha,
        beta,
        per_ball,
        supremum,
        attaining_ball,
        skipped,
    })
}

/// Upper bound on the tent value of a ball of radius `r` implied by
/// `|F(x, t)| <= c₁ t^α`: `c₁ (Σ_{t_i <= r} t_i^{2α} Δlog t)^{1/2} / (2r)^α`.
pub fn carleson_growth_bound(c1: f64, alpha: f64, tgrid: &TimeGrid, radius: f64) -> f64 {
    let s: f64 = tgrid
        .points()
        .iter()
        .take_while(|&&t| t <= radius)
        .map(|t| t.powf(2.0 * alpha) * tgrid.log_step())
        .sum();
    c1 * s.sqrt() / (2.0 * radius).powf(alpha)
}
