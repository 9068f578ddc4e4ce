use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Smallest admissible number of samples on the torus.
pub const MIN_POINTS: usize = 16;

/// Uniform samples `x_j = -P/2 + j·h` of the torus `[-P/2, P/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    n_points: usize,
    period: f64,
}

impl PeriodicGrid {
    pub fn new(n_points: usize, period: f64) -> Result<Self> {
        if n_points < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidGrid(format!("period must be positive, got {period}")));
        }
        Ok(Self { n_points, period })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn period(&self) -> f64 {
        self.period
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.period / self.n_points as f64
    }

    #[inline]
    pub fn coordinate(&self, j: usize) -> f64 {
        -0.5 * self.period + j as f64 * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.coordinate(j)).collect()
    }

    /// Index of the node closest to `x` (after wrapping onto the torus).
    pub fn nearest_index(&self, x: f64) -> usize {
        let u = (x + 0.5 * self.period).rem_euclid(self.period) / self.spacing();
        (u.round() as usize) % self.n_points
    }

    /// Index of the node at `x = 0`, or the closest one when `N` is odd.
    pub fn origin_index(&self) -> usize {
        self.nearest_index(0.0)
    }

    /// Number of grid steps between `i` and `j` along the shorter arc.
    #[inline]
    pub fn index_distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j) % self.n_points;
        d.min(self.n_points - d)
    }

    #[inline]
    pub fn periodic_distance(&self, i: usize, j: usize) -> f64 {
        self.index_distance(i, j) as f64 * self.spacing()
    }

    /// `min(|x - y|, P - |x - y|)` for arbitrary coordinates.
    pub fn periodic_distance_coords(&self, x: f64, y: f64) -> f64 {
        let d = (x - y).rem_euclid(self.period);
        d.min(self.period - d)
    }

    /// Index reached by moving `offset` steps from `j` (negative offsets allowed).
    #[inline]
    pub fn shift(&self, j: usize, offset: isize) -> usize {
        let n = self.n_points as isize;
        (j as isize + offset).rem_euclid(n) as usize
    }

    /// Same geometry with twice as many samples.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points,
            period: self.period,
        }
    }
}

/// A periodic interval `B(x_c, r)` centred on a grid node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: usize, radius: f64) -> Self {
        Self { center, radius }
    }

    /// Lebesgue measure `|B| = 2r`.
    #[inline]
    pub fn measure(&self) -> f64 {
        2.0 * self.radius
    }

    /// Midpoint-rule weights: node `j` carries the length of its cell
    /// `[x_j - h/2, x_j + h/2]` that falls inside the ball. The weights sum to
    /// `2r` for every `0 < r <= P/2`.
    pub fn cells(&self, grid: &PeriodicGrid) -> Result<Vec<(usize, f64)>> {
        if !(self.radius > 0.0) || self.center >= grid.len() {
            return Err(Error::EmptyBall {
                center: self.center,
                radius: self.radius,
            });
        }
        let h = grid.spacing();
        let r = self.radius.min(0.5 * grid.period());
        let reach = ((r / h) + 0.5).ceil() as isize;
        let max_reach = (grid.len() as isize - 1) / 2;
        let mut cells = Vec::with_capacity(2 * reach as usize + 1);
        for off in -reach.min(max_reach)..=reach.min(max_reach) {
            let c = off as f64 * h;
            let lo = (c - 0.5 * h).max(-r);
            let hi = (c + 0.5 * h).min(r);
            let w = hi - lo;
            if w > 0.0 {
                cells.push((grid.shift(self.center, off), w));
            }
        }
        // Even N at r = P/2: the antipodal cell is split between both ends.
        if grid.len().is_multiple_of(2) && r > 0.5 * grid.period() - 0.5 * h {
            let off = (grid.len() / 2) as isize;
            let w = 2.0 * (r - (off as f64 * h - 0.5 * h));
            if w > 0.0 {
                cells.push((grid.shift(self.center, off), w));
            }
        }
        if cells.is_empty() {
            return Err(Error::EmptyBall {
                center: self.center,
                radius: self.radius,
            });
        }
        Ok(cells)
    }
}

/// A finite family of balls over which suprema are taken.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallFamily {
    balls: Vec<Ball>,
}

impl BallFamily {
    pub fn new(grid: &PeriodicGrid, balls: Vec<Ball>) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::InvalidArgument("ball family is empty".into()));
        }
        let r_max = 0.25 * grid.period();
        for b in &balls {
            if !(b.radius > 0.0) || b.radius > r_max * (1.0 + 1e-12) || b.center >= grid.len() {
                return Err(Error::EmptyBall {
                    center: b.center,
                    radius: b.radius,
                });
            }
        }
        Ok(Self { balls })
    }

    /// Radii `h, 2h, 4h, …` capped at `P/4`, centred at every `stride`-th node.
    pub fn dyadic(grid: &PeriodicGrid, stride: usize) -> Self {
        let stride = stride.max(1);
        let radii = Self::dyadic_radii(grid);
        let balls = (0..grid.len())
            .step_by(stride)
            .flat_map(|c| radii.iter().map(move |&r| Ball::new(c, r)))
            .collect();
        Self { balls }
    }

    pub fn dyadic_radii(grid: &PeriodicGrid) -> Vec<f64> {
        let h = grid.spacing();
        let r_max = 0.25 * grid.period();
        let mut radii = Vec::new();
        let mut r = h;
        while r <= r_max * (1.0 + 1e-12) {
            radii.push(r);
            r *= 2.0;
        }
        radii
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }
}
