use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use super::{SuiteConfig, VerdictReport};
use crate::calculus::{spectrum_for, Spectral, TimeGrid};
use crate::lattice::{build_operator, Ball, BallFamily, CriticalRadiusField, PeriodicGrid, Potential};
use crate::Result;

type Key = (usize, u64, String);
type Cache<T> = Mutex<BTreeMap<Key, Arc<T>>>;

/// Validated configuration plus a cache of spectra and radius fields
/// shared by concurrently running suites.
pub struct Context {
    config: SuiteConfig,
    hash: String,
    spectra: Cache<dyn Spectral>,
    radii: Cache<CriticalRadiusField>,
}

// The lock is never held while building: builders may run rayon jobs, and a
// waiting rayon worker can pick up another job that asks for the same key.
fn cached<T: ?Sized>(map: &Cache<T>, key: Key, build: impl FnOnce() -> Result<Arc<T>>) -> Result<Arc<T>> {
    if let Some(v) = map.lock().expect("cache lock").get(&key) {
        return Ok(v.clone());
    }
    let v = build()?;
    Ok(map.lock().expect("cache lock").entry(key).or_insert(v).clone())
}

impl Context {
    pub fn new(config: SuiteConfig) -> Result<Self> {
        config.validate()?;
        let hash = config.hash()?;
        Ok(Self {
            config,
            hash,
            spectra: Mutex::new(BTreeMap::new()),
            radii: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn config(&self) -> &SuiteConfig {
        &self.config
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn report(&self, suite: &str) -> VerdictReport {
        VerdictReport::new(suite, self.hash.clone())
    }

    /// The configured period at `n` points.
    pub fn grid(&self, n: usize) -> Result<PeriodicGrid> {
        PeriodicGrid::new(n, self.config.period)
    }

    /// The configured grid and its one-step refinement.
    pub fn grid_pair(&self) -> Result<(PeriodicGrid, PeriodicGrid)> {
        let g = self.grid(self.config.grid_n)?;
        Ok((g, g.refined()))
    }

    pub fn constant_potential(&self) -> String {
        format!("constant:{}", self.config.mu)
    }

    pub fn spectrum(&self, grid: &PeriodicGrid, potential: &str) -> Result<Arc<dyn Spectral>> {
        let key = (grid.len(), grid.period().to_bits(), potential.to_string());
        cached(&self.spectra, key, || {
            let v = Potential::from_spec(grid, potential)?;
            let op = build_operator(grid, &v)?;
            Ok(Arc::from(spectrum_for(&op)?))
        })
    }

    pub fn rho(&self, grid: &PeriodicGrid, potential: &str) -> Result<Arc<CriticalRadiusField>> {
        let key = (grid.len(), grid.period().to_bits(), potential.to_string());
        cached(&self.radii, key, || {
            let v = Potential::from_spec(grid, potential)?;
            Ok(Arc::new(CriticalRadiusField::compute(grid, &v, self.config.dimension)?))
        })
    }

    /// Log-uniform times over the configured window, scaled by `P/(2π)`.
    pub fn time_grid(&self, grid: &PeriodicGrid) -> Result<TimeGrid> {
        let scale = grid.period() / (2.0 * std::f64::consts::PI);
        let (lo, hi) = self.config.time_window;
        TimeGrid::log_uniform(lo * scale, hi * scale, self.config.time_points)
    }

    pub fn tol(&self, base: f64) -> f64 {
        base * self.config.tolerance_scale
    }

    pub fn band(&self) -> (f64, f64) {
        let (lo, hi) = self.config.comparability_band;
        let s = self.config.tolerance_scale;
        (lo / s, hi * s)
    }

    pub fn stability(&self) -> f64 {
        self.config.stability * self.config.tolerance_scale
    }

    pub fn tent_balls(&self, coarse: &PeriodicGrid, grid: &PeriodicGrid) -> Result<BallFamily> {
        tent_balls(coarse, grid, self.config.ball_stride)
    }
}

/// Balls that exist identically on `coarse` and on any refinement `grid`:
/// radii `P/4, P/8, …` down to `2h` of the coarse grid, centred on every
/// `stride`-th coarse node.
pub fn tent_balls(coarse: &PeriodicGrid, grid: &PeriodicGrid, stride: usize) -> Result<BallFamily> {
    let mut radii = Vec::new();
    let mut r = 0.25 * coarse.period();
    while r >= 2.0 * coarse.spacing() {
        radii.push(r);
        r *= 0.5;
    }
    let balls = (0..coarse.len())
        .step_by(stride.max(1))
        .flat_map(|c| {
            let center = grid.nearest_index(coarse.coordinate(c));
            radii.iter().map(move |&r| Ball::new(center, r))
        })
        .collect();
    BallFamily::new(grid, balls)
}
