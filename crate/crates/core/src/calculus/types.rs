use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::lattice::PeriodicGrid;
use crate::{Error, Result};

/// Complex samples `f(x_j)` on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: PeriodicGrid,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: &PeriodicGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                found: samples.len(),
            });
        }
        Ok(Self { grid: *grid, samples })
    }

    pub fn from_real(grid: &PeriodicGrid, samples: &[f64]) -> Result<Self> {
        Self::new(grid, samples.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(grid: &PeriodicGrid, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid: *grid,
            samples: grid.coordinates().into_iter().map(f).collect(),
        }
    }

    pub fn zeros(grid: &PeriodicGrid) -> Self {
        Self {
            grid: *grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn constant(grid: &PeriodicGrid, c: Complex64) -> Self {
        Self {
            grid: *grid,
            samples: vec![c; grid.len()],
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(h Σ |f_j|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.spacing() * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `h Σ |f_j|`.
    pub fn l1_norm(&self) -> f64 {
        self.grid.spacing() * self.samples.iter().map(|z| z.norm()).sum::<f64>()
    }

    /// `⟨f, g⟩ = h Σ f_j conj(g_j)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.spacing())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::SizeMismatch {
                expected: self.grid.len(),
                found: other.grid.len(),
            });
        }
        Ok(())
    }
}

/// Log-uniform time samples `t_0 < … < t_{M-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    points: Vec<f64>,
    log_step: f64,
}

impl TimeGrid {
    pub fn log_uniform(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) || count < 2 {
            return Err(Error::InvalidArgument(format!(
                "time grid needs 0 < t_min < t_max and at least 2 points, got [{t_min}, {t_max}] x {count}"
            )));
        }
        let log_step = (t_max / t_min).ln() / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| t_min * (i as f64 * log_step).exp()).collect();
        points[count - 1] = t_max;
        Ok(Self { points, log_step })
    }

    /// 64 points in `[1e-3, 10]·P/(2π)`.
    pub fn default_for(grid: &PeriodicGrid) -> Self {
        let scale = grid.period() / (2.0 * std::f64::consts::PI);
        Self::log_uniform(1e-3 * scale, 10.0 * scale, 64).expect("valid default time grid")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t_min(&self) -> f64 {
        self.points[0]
    }

    pub fn t_max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// `Δ log t`, constant across the grid.
    pub fn log_step(&self) -> f64 {
        self.log_step
    }

    /// Trapezoid weights for `∫ g(t) dt/t` over `[t_min, t_max]`.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let m = self.points.len();
        (0..m)
            .map(|i| {
                if i == 0 || i == m - 1 {
                    0.5 * self.log_step
                } else {
                    self.log_step
                }
            })
            .collect()
    }
}

/// Values `F(x_j, t_i)`, stored time-major, tagged with the derivative order
/// they hold.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeField {
    grid: PeriodicGrid,
    times: TimeGrid,
    order: f64,
    values: Vec<Complex64>,
}

impl SpacetimeField {
    pub fn new(grid: &PeriodicGrid, times: &TimeGrid, order: f64, values: Vec<Complex64>) -> Result<Self> {
        let expected = grid.len() * times.len();
        if values.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                found: values.len(),
            });
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::SpectralInvariant(
                "spacetime field has non-finite entries".into(),
            ));
        }
        Ok(Self {
            grid: *grid,
            times: times.clone(),
            order,
            values,
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn times(&self) -> &TimeGrid {
        &self.times
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    /// All spatial samples at time index `i`.
    pub fn at_time(&self, i: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn value(&self, x: usize, t: usize) -> Complex64 {
        self.values[t * self.grid.len() + x]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// A fractional order `β > 0` together with `m` (the smallest integer
/// strictly above `β`) and the phase `e^{iπβ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalOrder {
    beta: f64,
    m: u32,
}

impl FractionalOrder {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) || beta > 64.0 {
            return Err(Error::InvalidArgument(format!(
                "fractional order must lie in (0, 64], got {beta}"
            )));
        }
        Ok(Self {
            beta,
            m: beta.floor() as u32 + 1,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_integer(&self) -> bool {
        self.beta.fract() == 0.0
    }

    /// `e^{iπβ}`; exactly `(-1)^β` for integer orders.
    pub fn phase(&self) -> Complex64 {
        if self.is_integer() {
            let sign = if (self.beta as u64).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            Complex64::new(sign, 0.0)
        } else {
            Complex64::from_polar(1.0, std::f64::consts::PI * self.beta)
        }
    }
}
