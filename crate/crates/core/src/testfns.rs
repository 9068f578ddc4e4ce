//! Canonical inputs: Weierstrass truncations, the logarithmic bump, Hölder
//! cusps, eigenmodes and seeded band-limited noise.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::calculus::{GridFunction, Spectral};
use crate::lattice::PeriodicGrid;
use crate::{Error, Result};

/// `Σ_{k=1}^K 2^{-k} e^{2πi 2^k x}`.
///
/// The grid period must be an integer and the top frequency must sit at or
/// below a quarter of the Nyquist band: `2^K · P <= N/4`.
pub fn weierstrass(grid: &PeriodicGrid, k_terms: u32) -> Result<GridFunction> {
    let p = grid.period();
    if p.fract() != 0.0 {
        return Err(Error::Unresolvable(format!(
            "Weierstrass series needs an integer period, got {p}"
        )));
    }
    if k_terms == 0 || k_terms > 40 {
        return Err(Error::Unresolvable(format!(
            "number of terms must lie in 1..=40, got {k_terms}"
        )));
    }
    let cycles = 2f64.powi(k_terms as i32) * p;
    if cycles > grid.len() as f64 / 4.0 {
        return Err(Error::Unresolvable(format!(
            "K = {k_terms} puts {cycles} cycles on {} points; need at most N/4",
            grid.len()
        )));
    }
    Ok(GridFunction::from_fn(grid, |x| {
        (1..=k_terms)
            .map(|k| {
                let freq = 2f64.powi(k as i32);
                Complex64::from_polar(1.0 / freq, 2.0 * PI * (freq * x).rem_euclid(1.0))
            })
            .sum()
    }))
}

/// `max(log 1/|x|, 0)`; a node sitting exactly at `0` gets `log(2/h)`.
pub fn log_bump(grid: &PeriodicGrid) -> Result<GridFunction> {
    if grid.period() < 4.0 {
        return Err(Error::InvalidArgument(format!(
            "log bump needs period at least 4, got {}",
            grid.period()
        )));
    }
    let cap = (2.0 / grid.spacing()).ln();
    Ok(GridFunction::from_fn(grid, |x| {
        let v = if x == 0.0 { cap } else { (-x.abs().ln()).max(0.0) };
        Complex64::new(v, 0.0)
    }))
}

/// `dist(x, 0)^α` with the periodic distance.
pub fn holder_cusp(grid: &PeriodicGrid, alpha: f64) -> Result<GridFunction> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "cusp exponent must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(GridFunction::from_fn(grid, |x| {
        Complex64::new(grid.periodic_distance_coords(x, 0.0).powf(alpha), 0.0)
    }))
}

/// The `k`-th eigenvector (ascending eigenvalues).
pub fn eigen_mode(spec: &dyn Spectral, k: usize) -> Result<GridFunction> {
    spec.eigenvector(k)
}

/// Real trigonometric polynomial of degree `cutoff` with standard normal
/// coefficients drawn from a seeded ChaCha stream, scaled to unit `L²` norm.
pub fn random_smooth(grid: &PeriodicGrid, seed: u64, cutoff: usize) -> Result<GridFunction> {
    let n = grid.len();
    if cutoff == 0 || 2 * cutoff >= n {
        return Err(Error::InvalidArgument(format!(
            "cutoff must lie in 1..{}, got {cutoff}",
            n.div_ceil(2)
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> = (0..=cutoff)
        .map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let samples: Vec<f64> = (0..n)
        .map(|j| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| {
                    let theta = 2.0 * PI * ((k * j) % n) as f64 / n as f64;
                    a * theta.cos() + b * theta.sin()
                })
                .sum()
        })
        .collect();
    let f = GridFunction::from_real(grid, &samples)?;
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("degenerate random draw".into()));
    }
    Ok(f.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// A named test function, parseable from strings such as
/// `weierstrass:K=8`, `log_bump`, `holder_cusp:alpha=0.5`, `eigen_mode:k=3`
/// or `random_smooth:seed=7,cutoff=12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunctionSpec {
    Weierstrass { terms: u32 },
    LogBump,
    HolderCusp { alpha: f64 },
    EigenMode { index: usize },
    RandomSmooth { seed: u64, cutoff: usize },
}

impl TestFunctionSpec {
    /// Builds the samples; `spec` is only consulted for eigenmodes.
    pub fn build(&self, grid: &PeriodicGrid, spec: Option<&dyn Spectral>) -> Result<GridFunction> {
        match *self {
            Self::Weierstrass { terms } => weierstrass(grid, terms),
            Self::LogBump => log_bump(grid),
            Self::HolderCusp { alpha } => holder_cusp(grid, alpha),
            Self::EigenMode { index } => {
                let spec =
                    spec.ok_or_else(|| Error::InvalidArgument("eigen_mode needs a spectral decomposition".into()))?;
                eigen_mode(spec, index)
            }
            Self::RandomSmooth { seed, cutoff } => random_smooth(grid, seed, cutoff),
        }
    }
}

impl fmt::Display for TestFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Weierstrass { terms } => write!(f, "weierstrass:K={terms}"),
            Self::LogBump => write!(f, "log_bump"),
            Self::HolderCusp { alpha } => write!(f, "holder_cusp:alpha={alpha}"),
            Self::EigenMode { index } => write!(f, "eigen_mode:k={index}"),
            Self::RandomSmooth { seed, cutoff } => write!(f, "random_smooth:seed={seed},cutoff={cutoff}"),
        }
    }
}

impl FromStr for TestFunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let mut params = std::collections::BTreeMap::new();
        for item in args.split(',').map(str::trim).filter(|a| !a.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value in {s:?}, got {item:?}")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        fn get<T: FromStr>(
            params: &std::collections::BTreeMap<String, String>,
            key: &str,
            default: Option<T>,
        ) -> Result<T> {
            match params.get(key) {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("cannot parse {key}={v}"))),
                None => default.ok_or_else(|| Error::InvalidArgument(format!("missing parameter {key}"))),
            }
        }
        match kind {
            "weierstrass" => Ok(Self::Weierstrass {
                terms: get(&params, "K", None)?,
            }),
            "log_bump" => Ok(Self::LogBump),
            "holder_cusp" => Ok(Self::HolderCusp {
                alpha: get(&params, "alpha", None)?,
            }),
            "eigen_mode" => Ok(Self::EigenMode {
                index: get(&params, "k", None)?,
            }),
            "random_smooth" => Ok(Self::RandomSmooth {
                seed: get(&params, "seed", Some(0))?,
                cutoff: get(&params, "cutoff", Some(8))?,
            }),
            _ => Err(Error::InvalidArgument(format!("unknown test function {kind:?}"))),
        }
    }
}
