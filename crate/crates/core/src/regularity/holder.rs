use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::GridFunction;
use crate::lattice::CriticalRadiusField;
use crate::{Error, Result};

/// `‖f‖_{C_L^{0,α}} = [f]_{C^α} + [f]_{M_L^α}` with the points that attain
/// each part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub alpha: f64,
    pub holder_seminorm: f64,
    pub growth_seminorm: f64,
    pub total: f64,
    pub attaining_pair: (usize, usize),
    pub attaining_point: usize,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Hölder exponent must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

/// Every offset `1..=N/2`.
pub fn all_offsets(n: usize) -> Vec<usize> {
    (1..=n / 2).collect()
}

/// Offsets `1..=dense` followed by a geometric progression with ratio
/// `1 + growth` up to `N/2`. Used where the full `O(N²)` scan is too slow.
pub fn sparse_offsets(n: usize, dense: usize, growth: f64) -> Vec<usize> {
    let top = n / 2;
    let mut out: Vec<usize> = (1..=dense.min(top)).collect();
    let mut d = dense.max(1) as f64;
    while (d as usize) < top {
        d = (d * (1.0 + growth)).max(d + 1.0);
        out.push((d as usize).min(top));
    }
    out.dedup();
    out
}

/// `sup |f(x) - f(y)| / dist(x, y)^α` over node pairs whose index distance
/// lies in `offsets`; returns the value and one attaining pair.
pub fn holder_seminorm_offsets(f: &GridFunction, alpha: f64, offsets: &[usize]) -> Result<(f64, (usize, usize))> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "exponent must lie in [0, 1], got {alpha}"
        )));
    }
    let grid = *f.grid();
    let n = grid.len();
    let s = f.samples();
    let best = offsets
        .par_iter()
        .filter(|&&d| d >= 1 && d <= n / 2)
        .map(|&d| {
            let denom = (d as f64 * grid.spacing()).powf(alpha);
            let mut local = (0.0, (0, 0));
            for i in 0..n {
                let j = (i + d) % n;
                let r = (s[j] - s[i]).norm() / denom;
                if r > local.0 {
                    local = (r, (i, j));
                }
            }
            local
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, (0, 0)), |acc, x| if x.0 > acc.0 { x } else { acc });
    Ok(best)
}

/// `[f]_{C^α}` over all node pairs at periodic distance in `(0, P/2]`.
pub fn holder_seminorm(f: &GridFunction, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(holder_seminorm_offsets(f, alpha, &all_offsets(f.len()))?.0)
}

/// `sup |f(x+y) + f(x-y) - 2f(x)| / |y|^α` over the given offsets.
pub fn second_difference_constant(f: &GridFunction, alpha: f64, offsets: &[usize]) -> Result<f64> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "exponent must lie in [0, 2], got {alpha}"
        )));
    }
    let grid = *f.grid();
    let n = grid.len();
    let s = f.samples();
    let per_offset: Vec<f64> = offsets
        .par_iter()
        .filter(|&&d| d >= 1 && d <= n / 2)
        .map(|&d| {
            let denom = (d as f64 * grid.spacing()).powf(alpha);
            (0..n)
                .map(|i| (s[(i + d) % n] + s[(i + n - d) % n] - 2.0 * s[i]).norm() / denom)
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(per_offset.into_iter().fold(0.0, f64::max))
}

fn check_rho(f: &GridFunction, rho: &CriticalRadiusField) -> Result<()> {
    if rho.len() != f.len() {
        return Err(Error::SizeMismatch {
            expected: f.len(),
            found: rho.len(),
        });
    }
    Ok(())
}

/// `[f]_{M_L^α} = max_j ρ(x_j)^{-α} |f_j|` with the attaining node.
pub fn rho_growth_seminorm_at(f: &GridFunction, alpha: f64, rho: &CriticalRadiusField) -> Result<(f64, usize)> {
    check_rho(f, rho)?;
    Ok(f.samples()
        .iter()
        .zip(&rho.values)
        .enumerate()
        .map(|(j, (z, r))| (z.norm() / r.powf(alpha), j))
        .fold((0.0, 0), |acc, x| if x.0 > acc.0 { x } else { acc }))
}

pub fn rho_growth_seminorm(f: &GridFunction, alpha: f64, rho: &CriticalRadiusField) -> Result<f64> {
    Ok(rho_growth_seminorm_at(f, alpha, rho)?.0)
}

pub fn holder_report(f: &GridFunction, alpha: f64, rho: &CriticalRadiusField) -> Result<HolderReport> {
    check_alpha(alpha)?;
    let (holder, pair) = holder_seminorm_offsets(f, alpha, &all_offsets(f.len()))?;
    let (growth, point) = rho_growth_seminorm_at(f, alpha, rho)?;
    Ok(HolderReport {
        alpha,
        holder_seminorm: holder,
        growth_seminorm: growth,
        total: holder + growth,
        attaining_pair: pair,
        attaining_point: point,
    })
}
