use std::fmt;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use super::semigroup::apply_multipliers;
use super::{GridFunction, Spectral};
use crate::{Error, Result};

/// Agreement required between the two multiplier routes (and the closed
/// form, where one exists), relative to `max(1, |m|)`.
pub const MULTIPLIER_TOL: f64 = 1e-8;

/// Upper limit of `w = s√λ` in the per-eigenvalue route; `e^{-50}` is
/// below double precision relative to `sup |a|`.
const W_MAX: f64 = 50.0;

/// A bounded profile `a(s)` on `[0, ∞)`.
#[derive(Clone)]
pub enum MultiplierProfile {
    Constant(f64),
    /// `1` on `[0, end]`, `0` afterwards.
    Indicator {
        end: f64,
    },
    /// `cos(ω s)`.
    Cosine {
        omega: f64,
    },
    Custom {
        name: String,
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        breakpoints: Vec<f64>,
    },
}

impl fmt::Debug for MultiplierProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Indicator { end } => write!(f, "Indicator(0, {end})"),
            Self::Cosine { omega } => write!(f, "Cosine({omega})"),
            Self::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl MultiplierProfile {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Indicator { end } => {
                if s <= *end {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Cosine { omega } => (omega * s).cos(),
            Self::Custom { eval, .. } => eval(s),
        }
    }

    /// Points where the profile is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Indicator { end } => vec![*end],
            Self::Custom { breakpoints, .. } => breakpoints.clone(),
            _ => Vec::new(),
        }
    }

    /// Widest quadrature panel that resolves the profile.
    fn panel_width(&self) -> f64 {
        match self {
            Self::Cosine { omega } if *omega > 0.0 => (std::f64::consts::PI / omega).min(0.5),
            _ => 0.5,
        }
    }

    /// `λ^{1/2} ∫_0^∞ e^{-s√λ} a(s) ds` where it has a closed form.
    pub fn closed_form(&self, lambda: f64) -> Option<f64> {
        let a = lambda.sqrt();
        match self {
            Self::Constant(c) => Some(*c),
            Self::Indicator { end } => Some(-(-end * a).exp_m1()),
            Self::Cosine { omega } => Some(lambda / (lambda + omega * omega)),
            Self::Custom { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Constant(c) if !c.is_finite() => {
                Err(Error::InvalidArgument("profile constant must be finite".into()))
            }
            Self::Indicator { end } if !(*end > 0.0 && end.is_finite()) => Err(Error::InvalidArgument(format!(
                "indicator end must be positive, got {end}"
            ))),
            Self::Cosine { omega } if !omega.is_finite() => {
                Err(Error::InvalidArgument("cosine frequency must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

fn gauss_rule(order: usize) -> Result<GaussLegendre> {
    let n = NonZeroUsize::new(order.max(2))
        .ok_or_else(|| Error::InvalidArgument("quadrature order must be positive".into()))?;
    Ok(GaussLegendre::new(n))
}

/// Nodes and weights of a composite Gauss–Legendre rule on consecutive
/// panels.
fn composite(rule: &GaussLegendre, edges: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(edges.len() * rule.nodes().len());
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, wt) in rule.nodes().zip(rule.weights()) {
            out.push((mid + half * x, half * wt));
        }
    }
    out
}

fn merge_breakpoints(mut edges: Vec<f64>, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let (lo, hi) = (edges[0], edges[edges.len() - 1]);
    edges.extend(extra.into_iter().filter(|&b| b > lo && b < hi));
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges
}

/// `m(λ) = ∫_0^∞ e^{-w} a(w/√λ) dw` on every eigenvalue, with composite
/// Gauss–Legendre panels of order `quad_points` on `[0, 50]`.
pub fn multiplier_by_eigenvalue(spec: &dyn Spectral, a: &MultiplierProfile, quad_points: usize) -> Result<Vec<f64>> {
    a.validate()?;
    let l0 = spec.lambda_min();
    if !(l0 > 0.0) {
        return Err(Error::NoSpectralGap(l0));
    }
    let rule = gauss_rule(quad_points)?;
    let unit: Vec<f64> = (0..=W_MAX as usize).map(|i| i as f64).collect();
    let width = a.panel_width();
    Ok(spec
        .eigenvalues()
        .iter()
        .map(|&l| {
            let root = l.sqrt();
            // Panels must also resolve the profile in the s variable.
            let step = (width * root).min(1.0);
            let n_fine = (W_MAX / step).ceil() as usize;
            let edges: Vec<f64> = if step < 1.0 {
                (0..=n_fine).map(|i| (i as f64 * step).min(W_MAX)).collect()
            } else {
                unit.clone()
            };
            let edges = merge_breakpoints(edges, a.breakpoints().into_iter().map(|b| b * root));
            composite(&rule, &edges)
                .into_iter()
                .map(|(w, wt)| wt * (-w).exp() * a.eval(w / root))
                .sum()
        })
        .collect())
}

/// `-∫_0^∞ ∂_s P_s a(s) ds` on every eigenvalue, with dyadic panels near
/// `s = 0` and uniform panels out to `40/√λ_0`.
pub fn multiplier_by_semigroup(spec: &dyn Spectral, a: &MultiplierProfile, quad_points: usize) -> Result<Vec<f64>> {
    a.validate()?;
    let l0 = spec.lambda_min();
    if !(l0 > 0.0) {
        return Err(Error::NoSpectralGap(l0));
    }
    let rule = gauss_rule(quad_points)?;
    let s_max = 40.0 / l0.sqrt();
    let width = a.panel_width();
    let mut edges = vec![0.0];
    let mut e = 1.0 / spec.lambda_max().sqrt().max(1.0);
    while e < width.min(s_max) {
        edges.push(e);
        e *= 2.0;
    }
    let mut e = *edges.last().expect("edges start at 0");
    while e < s_max {
        e = (e + width).min(s_max);
        edges.push(e);
    }
    let edges = merge_breakpoints(edges, a.breakpoints());
    let nodes: Vec<(f64, f64)> = composite(&rule, &edges)
        .into_iter()
        .map(|(s, wt)| (s, wt * a.eval(s)))
        .collect();
    Ok(spec
        .eigenvalues()
        .iter()
        .map(|&l| {
            let root = l.sqrt();
            // -∂_s e^{-s√λ} = √λ e^{-s√λ}
            nodes.iter().map(|(s, w)| w * root * (-s * root).exp()).sum()
        })
        .collect())
}

/// Laplace-transform-type multiplier `m(L) f` with
/// `m(λ) = λ^{1/2} ∫_0^∞ e^{-s√λ} a(s) ds`.
///
/// Both routes are evaluated; they must agree with each other (and with the
/// closed form for the builtin profiles).
pub fn laplace_multiplier(
    spec: &dyn Spectral,
    a: &MultiplierProfile,
    f: &GridFunction,
    quad_points: usize,
) -> Result<GridFunction> {
    let by_eig = multiplier_by_eigenvalue(spec, a, quad_points)?;
    let by_semigroup = multiplier_by_semigroup(spec, a, quad_points)?;
    let dev = by_eig
        .iter()
        .zip(&by_semigroup)
        .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max);
    if !(dev <= MULTIPLIER_TOL) {
        return Err(Error::OracleMismatch {
            route: "laplace_multiplier",
            deviation: dev,
            tolerance: MULTIPLIER_TOL,
        });
    }
    if a.closed_form(1.0).is_some() {
        let dev = by_eig
            .iter()
            .zip(spec.eigenvalues())
            .map(|(x, &l)| {
                let c = a.closed_form(l).expect("closed form available");
                (x - c).abs() / c.abs().max(1.0)
            })
            .fold(0.0, f64::max);
        if !(dev <= MULTIPLIER_TOL) {
            return Err(Error::OracleMismatch {
                route: "laplace_multiplier_closed_form",
                deviation: dev,
                tolerance: MULTIPLIER_TOL,
            });
        }
    }
    let mult: Vec<Complex64> = by_eig.into_iter().map(|m| Complex64::new(m, 0.0)).collect();
    apply_multipliers(spec, &mult, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{eigendecompose, poisson_spectral, DEFAULT_EIGEN_TOL};
    use crate::lattice::{build_operator, PeriodicGrid, Potential};

    fn spec() -> crate::calculus::SpectralDecomposition {
        let g = PeriodicGrid::new(64, 8.0).unwrap();
        eigendecompose(
            &build_operator(&g, &Potential::quadratic(&g)).unwrap(),
            DEFAULT_EIGEN_TOL,
        )
        .unwrap()
    }

    #[test]
    fn builtin_profiles_match_laplace_transforms() {
        let spec = spec();
        let profiles = [
            MultiplierProfile::Constant(1.0),
            MultiplierProfile::Indicator { end: 0.7 },
            MultiplierProfile::Cosine { omega: 3.0 },
        ];
        for a in &profiles {
            let m1 = multiplier_by_eigenvalue(&spec, a, 16).unwrap();
            let m2 = multiplier_by_semigroup(&spec, a, 16).unwrap();
            for ((x, y), &l) in m1.iter().zip(&m2).zip(spec.eigenvalues()) {
                let c = a.closed_form(l).unwrap();
                assert!((x - c).abs() < 1e-10, "{a:?} λ = {l}: {x} vs {c}");
                assert!((y - c).abs() < 1e-10, "{a:?} λ = {l}: {y} vs {c}");
            }
        }
    }

    #[test]
    fn identity_zero_and_indicator_outputs() {
        let spec = spec();
        let g = *spec.grid();
        let f = GridFunction::from_fn(&g, |x| Complex64::new((-x * x).exp(), 0.0));
        let same = laplace_multiplier(&spec, &MultiplierProfile::Constant(1.0), &f, 16).unwrap();
        assert!(same.max_abs_diff(&f).unwrap() < 1e-6);
        let zero = laplace_multiplier(&spec, &MultiplierProfile::Constant(0.0), &f, 16).unwrap();
        assert!(zero.sup_norm() < 1e-15);
        let t = 0.9;
        let ind = laplace_multiplier(&spec, &MultiplierProfile::Indicator { end: t }, &f, 16).unwrap();
        let expect = f.sub(&poisson_spectral(&spec, t, &f).unwrap()).unwrap();
        assert!(ind.max_abs_diff(&expect).unwrap() < 1e-6);
    }

    #[test]
    fn custom_profile_routes_agree() {
        let spec = spec();
        let a = MultiplierProfile::Custom {
            name: "ramp".into(),
            eval: Arc::new(|s: f64| if s < 2.0 { s / 2.0 } else { 1.0 }),
            breakpoints: vec![2.0],
        };
        let f = GridFunction::constant(spec.grid(), Complex64::new(1.0, 0.0));
        assert!(laplace_multiplier(&spec, &a, &f, 16).is_ok());
    }
}
