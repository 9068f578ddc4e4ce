use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::lattice::MIN_POINTS;
use crate::{Error, Result};

/// Every parameter a suite may read. The SHA-256 of its JSON form is the
/// configuration hash stamped on each check record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub grid_n: usize,
    pub period: f64,
    pub potential: String,
    pub dimension: u32,
    /// Level of the constant potential used by the `V ≡ μ` suites.
    pub mu: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub time_points: usize,
    /// Time window as multiples of `P/(2π)`.
    pub time_window: (f64, f64),
    /// Ball centres sit on every `ball_stride`-th node of the coarse grid.
    pub ball_stride: usize,
    pub probes: usize,
    pub seed: u64,
    /// Multiplies every numerical tolerance and widens the comparability
    /// band and the stability allowance by the same factor.
    pub tolerance_scale: f64,
    pub comparability_band: (f64, f64),
    pub stability: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            grid_n: 256,
            period: 8.0,
            potential: "quadratic".into(),
            dimension: 1,
            mu: 1.0,
            alphas: vec![0.3, 0.5, 0.8],
            betas: vec![1.0, 1.5],
            sigmas: vec![0.3],
            time_points: 64,
            time_window: (1e-3, 10.0),
            ball_stride: 4,
            probes: 10,
            seed: 42,
            tolerance_scale: 1.0,
            comparability_band: (0.1, 10.0),
            stability: 0.2,
        }
    }
}

fn bad(msg: String) -> Error {
    Error::Config(msg)
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < MIN_POINTS {
            return Err(bad(format!(
                "grid_n must be at least {MIN_POINTS}, got {}",
                self.grid_n
            )));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(bad(format!("period must be positive, got {}", self.period)));
        }
        if self.dimension != 1 {
            return Err(Error::UnsupportedDimension(self.dimension));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(bad(format!("mu must be positive, got {}", self.mu)));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
            return Err(bad(format!(
                "alphas must be nonempty and lie in (0, 1), got {:?}",
                self.alphas
            )));
        }
        if self.betas.is_empty() || self.betas.iter().any(|b| !(*b > 0.0 && *b <= 64.0)) {
            return Err(bad(format!(
                "betas must be nonempty and lie in (0, 64], got {:?}",
                self.betas
            )));
        }
        if self.sigmas.is_empty() || self.sigmas.iter().any(|s| !(*s > 0.0 && *s < 1.0)) {
            return Err(bad(format!(
                "sigmas must be nonempty and lie in (0, 1), got {:?}",
                self.sigmas
            )));
        }
        let (lo, hi) = self.time_window;
        if self.time_points < 8 || !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(bad(format!(
                "time grid needs at least 8 points and 0 < lo < hi, got {} on {:?}",
                self.time_points, self.time_window
            )));
        }
        if self.ball_stride == 0 || self.probes == 0 {
            return Err(bad("ball_stride and probes must be positive".into()));
        }
        if !(self.tolerance_scale > 0.0 && self.tolerance_scale.is_finite()) {
            return Err(bad(format!(
                "tolerance_scale must be positive, got {}",
                self.tolerance_scale
            )));
        }
        let (blo, bhi) = self.comparability_band;
        if !(blo > 0.0 && bhi > blo && bhi.is_finite()) {
            return Err(bad(format!(
                "comparability band must satisfy 0 < lo < hi, got {:?}",
                self.comparability_band
            )));
        }
        if !(self.stability > 0.0 && self.stability < 1.0) {
            return Err(bad(format!("stability must lie in (0, 1), got {}", self.stability)));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> Result<String> {
        let json = serde_json::to_vec(self)?;
        Ok(hex::encode(Sha256::digest(&json)))
    }
}
