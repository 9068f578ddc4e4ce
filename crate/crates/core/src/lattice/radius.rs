use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BallFamily, PeriodicGrid, Potential};
use crate::{Error, Result};

/// Relative bisection tolerance on `r`.
pub const RHO_REL_TOL: f64 = 1e-10;

/// Exact integral of the cellwise-constant potential over periodic intervals,
/// via prefix sums.
#[derive(Debug, Clone)]
pub struct CellIntegral {
    prefix: Vec<f64>,
    values: Vec<f64>,
    total: f64,
    spacing: f64,
}

impl CellIntegral {
    pub fn new(grid: &PeriodicGrid, values: &[f64]) -> Self {
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for &v in values {
            acc += v;
            prefix.push(acc);
        }
        Self {
            prefix,
            values: values.to_vec(),
            total: acc,
            spacing: grid.spacing(),
        }
    }

    /// Antiderivative in index units, measured from the left edge of cell 0.
    fn antiderivative(&self, u: f64) -> f64 {
        let n = self.values.len() as f64;
        let s = u + 0.5;
        let m = s.floor();
        let wraps = m.div_euclid(n);
        let idx = m.rem_euclid(n) as usize;
        wraps * self.total + self.prefix[idx] + (s - m) * self.values[idx]
    }

    /// `∫_{B(x_center, r)} V` for `0 <= r <= P/2`.
    pub fn over_ball(&self, center: usize, radius: f64) -> f64 {
        let c = center as f64;
        let w = radius / self.spacing;
        self.spacing * (self.antiderivative(c + w) - self.antiderivative(c - w))
    }
}

/// `ρ(x_j)` for every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalRadiusField {
    pub values: Vec<f64>,
    pub dimension_parameter: u32,
    pub cap: f64,
}

impl CriticalRadiusField {
    pub fn compute(grid: &PeriodicGrid, v: &Potential, n_dim: u32) -> Result<Self> {
        v.check_grid(grid)?;
        check_dimension(n_dim)?;
        if v.is_trivial() {
            return Err(Error::RhoInfinite);
        }
        let integral = CellIntegral::new(grid, v.samples());
        let values = (0..grid.len())
            .into_par_iter()
            .map(|j| radius_by_bisection(grid, &integral, j))
            .collect();
        Ok(Self {
            values,
            dimension_parameter: n_dim,
            cap: 0.5 * grid.period(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&r| r == self.values[0])
    }
}

fn check_dimension(n_dim: u32) -> Result<()> {
    if n_dim != 1 {
        return Err(Error::UnsupportedDimension(n_dim));
    }
    Ok(())
}

/// `r^{2-n} ∫_{B(x, r)} V` with `n = 1`.
#[inline]
fn defining_map(integral: &CellIntegral, center: usize, r: f64) -> f64 {
    r * integral.over_ball(center, r)
}

fn radius_by_bisection(grid: &PeriodicGrid, integral: &CellIntegral, center: usize) -> f64 {
    let cap = 0.5 * grid.period();
    if defining_map(integral, center, cap) <= 1.0 {
        return cap;
    }
    let (mut lo, mut hi) = (0.0, cap);
    while hi - lo > RHO_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if defining_map(integral, center, mid) <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `sup { r ∈ (0, P/2] : r ∫_{B(x_j, r)} V <= 1 }`.
pub fn critical_radius(grid: &PeriodicGrid, v: &Potential, center_index: usize, n_dim: u32) -> Result<f64> {
    v.check_grid(grid)?;
    check_dimension(n_dim)?;
    if center_index >= grid.len() {
        return Err(Error::InvalidArgument(format!(
            "center index {center_index} out of range for {} points",
            grid.len()
        )));
    }
    if v.is_trivial() {
        return Err(Error::RhoInfinite);
    }
    let integral = CellIntegral::new(grid, v.samples());
    Ok(radius_by_bisection(grid, &integral, center_index))
}

/// Smallest `c >= 1` for which both comparability inequalities
///
/// `c⁻¹ ρ(x)(1 + d/ρ(x))^{-k0} <= ρ(y) <= c ρ(x)(1 + d/ρ(x))^{k0/(k0+1)}`
///
/// hold over every ordered pair of nodes.
pub fn check_rho_comparability(grid: &PeriodicGrid, field: &CriticalRadiusField, k0: f64) -> Result<f64> {
    if field.len() != grid.len() {
        return Err(Error::SizeMismatch {
            expected: grid.len(),
            found: field.len(),
        });
    }
    if !(k0 >= 1.0) {
        return Err(Error::InvalidArgument(format!("k0 must be at least 1, got {k0}")));
    }
    let upper_exp = k0 / (k0 + 1.0);
    let rho = &field.values;
    let c = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let rx = rho[i];
            let mut worst: f64 = 1.0;
            for (j, &ry) in rho.iter().enumerate() {
                let s = 1.0 + grid.periodic_distance(i, j) / rx;
                let lower = rx * s.powf(-k0) / ry;
                let upper = ry / (rx * s.powf(upper_exp));
                worst = worst.max(lower).max(upper);
            }
            worst
        })
        .reduce(|| 1.0, f64::max);
    Ok(c)
}

/// `sup_B (avg_B V^q)^{1/q} / avg_B V` with midpoint-rule averages.
///
/// A ball on which both averages vanish contributes `1`; a ball with
/// `avg V = 0 < avg V^q` makes the constant infinite.
pub fn reverse_holder_constant(grid: &PeriodicGrid, v: &Potential, q: f64, balls: &BallFamily) -> Result<f64> {
    v.check_grid(grid)?;
    if !(q > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "reverse Hölder exponent must exceed 1, got {q}"
        )));
    }
    let samples = v.samples();
    let ratios = balls
        .balls()
        .par_iter()
        .map(|ball| -> Result<f64> {
            let cells = ball.cells(grid)?;
            let measure: f64 = cells.iter().map(|c| c.1).sum();
            let mean: f64 = cells.iter().map(|&(j, w)| w * samples[j]).sum::<f64>() / measure;
            let mean_q: f64 = cells.iter().map(|&(j, w)| w * samples[j].powf(q)).sum::<f64>() / measure;
            Ok(match (mean > 0.0, mean_q > 0.0) {
                (false, false) => 1.0,
                (false, true) => f64::INFINITY,
                _ => mean_q.powf(1.0 / q) / mean,
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Ball;

    fn grid(n: usize, p: f64) -> PeriodicGrid {
        PeriodicGrid::new(n, p).unwrap()
    }

    #[test]
    fn cell_integral_of_constant_is_exact() {
        let g = grid(64, 8.0);
        let ci = CellIntegral::new(&g, &vec![3.0; 64]);
        for &r in &[0.01, 0.5, 1.234, 4.0] {
            assert!((ci.over_ball(7, r) - 6.0 * r).abs() < 1e-11);
        }
    }

    #[test]
    fn cell_integral_matches_cell_weights() {
        let g = grid(40, 5.0);
        let v = Potential::quadratic(&g);
        let ci = CellIntegral::new(&g, v.samples());
        for &(c, r) in &[(0usize, 0.3), (13, 1.1), (39, 2.5)] {
            let direct: f64 = Ball::new(c, r)
                .cells(&g)
                .unwrap()
                .iter()
                .map(|&(j, w)| w * v.samples()[j])
                .sum();
            assert!((ci.over_ball(c, r) - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_potential_closed_form() {
        let g = grid(128, 16.0);
        let mu = 0.5;
        let v = Potential::constant(&g, mu).unwrap();
        let rho = critical_radius(&g, &v, 3, 1).unwrap();
        let expected = 1.0 / (2.0 * mu).sqrt();
        assert!((rho - expected).abs() <= 1e-9 * expected);

        let v4 = Potential::constant(&g, 4.0 * mu).unwrap();
        let rho4 = critical_radius(&g, &v4, 3, 1).unwrap();
        assert!((rho4 - 0.5 * rho).abs() <= 1e-9 * rho);
    }

    #[test]
    fn tiny_potential_hits_the_cap() {
        let g = grid(32, 4.0);
        let v = Potential::constant(&g, 0.01).unwrap();
        assert_eq!(critical_radius(&g, &v, 0, 1).unwrap(), 2.0);
    }

    #[test]
    fn zero_potential_and_bad_dimension_are_errors() {
        let g = grid(32, 4.0);
        let zero = Potential::constant(&g, 0.0).unwrap();
        assert!(matches!(critical_radius(&g, &zero, 0, 1), Err(Error::RhoInfinite)));
        let v = Potential::quadratic(&g);
        assert!(matches!(
            critical_radius(&g, &v, 0, 3),
            Err(Error::UnsupportedDimension(3))
        ));
    }

    #[test]
    fn field_values_satisfy_defining_inequality() {
        let g = grid(64, 8.0);
        let v = Potential::quadratic(&g);
        let field = CriticalRadiusField::compute(&g, &v, 1).unwrap();
        let ci = CellIntegral::new(&g, v.samples());
        for (j, &r) in field.values.iter().enumerate() {
            assert!(r > 0.0 && r <= 4.0);
            assert!(r * ci.over_ball(j, r) <= 1.0 + 1e-12);
            if r < 4.0 {
                let above = r * (1.0 + 1e-8);
                assert!(above * ci.over_ball(j, above) > 1.0);
            }
        }
    }

    #[test]
    fn critical_radius_is_monotone_in_the_potential() {
        let g = grid(64, 8.0);
        let a = CriticalRadiusField::compute(&g, &Potential::constant(&g, 1.0).unwrap(), 1).unwrap();
        let b = CriticalRadiusField::compute(&g, &Potential::constant(&g, 2.0).unwrap(), 1).unwrap();
        for (ra, rb) in a.values.iter().zip(&b.values) {
            assert!(rb <= ra);
        }
    }

    #[test]
    fn comparability_constant_is_one_for_constant_rho() {
        let g = grid(64, 8.0);
        let field = CriticalRadiusField::compute(&g, &Potential::constant(&g, 2.0).unwrap(), 1).unwrap();
        assert!(field.is_constant());
        for k0 in [1.0, 2.0, 5.0] {
            assert_eq!(check_rho_comparability(&g, &field, k0).unwrap(), 1.0);
        }
    }

    #[test]
    fn comparability_matches_independent_pair_scan() {
        let g = grid(64, 4.0);
        let field = CriticalRadiusField::compute(&g, &Potential::quadratic(&g), 1).unwrap();
        let c = check_rho_comparability(&g, &field, 1.0).unwrap();
        // Independent scan written directly from the two inequalities,
        // using coordinate distances.
        let xs = g.coordinates();
        let mut best: f64 = 1.0;
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in xs.iter().enumerate() {
                let d = g.periodic_distance_coords(x, y);
                let (rx, ry) = (field.values[i], field.values[j]);
                let t = 1.0 + d / rx;
                best = best.max(rx / (t * ry)).max(ry / (rx * t.sqrt()));
            }
        }
        assert!(c.is_finite());
        assert!((c - best).abs() <= 1e-12 * best);
    }

    #[test]
    fn reverse_holder_cases() {
        let g = grid(64, 4.0);
        let fam = BallFamily::dyadic(&g, 1);
        let v = Potential::constant(&g, 3.0).unwrap();
        let c = reverse_holder_constant(&g, &v, 2.0, &fam).unwrap();
        assert!((c - 1.0).abs() < 1e-12);

        // Ball on which V vanishes: the ratio is defined as 1.
        let zero_ball = BallFamily::new(&g, vec![Ball::new(g.origin_index(), 0.5)]).unwrap();
        let w = Potential::well(&g, 2.0, 1.5).unwrap();
        assert_eq!(reverse_holder_constant(&g, &w, 2.0, &zero_ball).unwrap(), 1.0);
        assert!(reverse_holder_constant(&g, &v, 1.0, &fam).is_err());
    }

    #[test]
    fn reverse_holder_quadratic_matches_enumeration_and_grows_with_q() {
        let g = grid(64, 4.0);
        let v = Potential::quadratic(&g);
        let fam = BallFamily::dyadic(&g, 1);
        let c2 = reverse_holder_constant(&g, &v, 2.0, &fam).unwrap();

        // Enumeration over every (center, radius) pair of the family with an
        // explicit trapezoid-weight average.
        let h = g.spacing();
        let mut best: f64 = 0.0;
        for c in 0..64 {
            for r in BallFamily::dyadic_radii(&g) {
                let m = (r / h).round() as isize;
                let (mut s1, mut s2, mut wsum) = (0.0, 0.0, 0.0);
                for off in -m..=m {
                    let w = if off.abs() == m { 0.5 } else { 1.0 };
                    let val = v.samples()[g.shift(c, off)];
                    s1 += w * val;
                    s2 += w * val * val;
                    wsum += w;
                }
                let ratio = (s2 / wsum).sqrt() / (s1 / wsum);
                best = best.max(ratio);
            }
        }
        assert!(c2.is_finite());
        assert!((c2 - best).abs() <= 1e-10 * best);

        let c15 = reverse_holder_constant(&g, &v, 1.5, &fam).unwrap();
        let c4 = reverse_holder_constant(&g, &v, 4.0, &fam).unwrap();
        assert!(c15 <= c2 + 1e-12 && c2 <= c4 + 1e-12);
    }
}
