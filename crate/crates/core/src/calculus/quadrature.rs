//! Integral representations of Poisson-type operators, evaluated by
//! log-uniform trapezoid quadrature and validated against the spectral
//! closed forms.
//!
//! Every integrand here is a semigroup value `P_s f` (or `e^{-sL} f`)
//! weighted by a scalar, so the quadrature is linear in the semigroup: the
//! weighted sum of semigroup outputs equals the spectral multiplier
//! `Σ_i w_i g(s_i) e^{-s_i √λ}` applied to `f`. Each route accumulates that
//! effective multiplier on the whole spectrum, compares it with the closed
//! form, and only then applies it.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::semigroup::{apply_multipliers, frac_deriv_multiplier, frac_deriv_poisson_spectral};
use super::{FractionalOrder, GridFunction, Spectral};
use crate::{Error, Result};

/// Largest admissible deviation of an effective multiplier from its closed
/// form, relative to `max(1, |closed form|)`.
pub const ROUTE_TOL: f64 = 1e-8;

/// Log-uniform trapezoid rule for `∫_lo^hi G(u) du/u`.
#[derive(Debug, Clone)]
pub struct LogTrapezoid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    step: f64,
}

impl LogTrapezoid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) || points < 3 {
            return Err(Error::InvalidArgument(format!(
                "log quadrature needs 0 < lo < hi and at least 3 points, got [{lo:e}, {hi:e}] x {points}"
            )));
        }
        let (a, b) = (lo.ln(), hi.ln());
        let step = (b - a) / (points - 1) as f64;
        let nodes = (0..points).map(|i| (a + i as f64 * step).exp()).collect();
        let weights = (0..points)
            .map(|i| if i == 0 || i == points - 1 { 0.5 * step } else { step })
            .collect();
        Ok(Self { nodes, weights, step })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn lo(&self) -> f64 {
        self.nodes[0]
    }

    pub fn hi(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn sum(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Euler–Maclaurin endpoint terms for an integrand that behaves like
    /// `e^{p_lo s}` at the left end and `e^{p_hi s}` at the right end of the
    /// `s = ln u` interval.
    pub fn endpoint_correction(&self, h_lo: f64, p_lo: f64, h_hi: f64, p_hi: f64) -> f64 {
        // B_{2k} / (2k)! for k = 1, 2, 3.
        const C: [f64; 3] = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0];
        let mut corr = 0.0;
        let mut d2k = self.step * self.step;
        for (k, c) in C.iter().enumerate() {
            let j = 2 * k as i32 + 1;
            corr -= c * d2k * (p_hi.powi(j) * h_hi - p_lo.powi(j) * h_lo);
            d2k *= self.step * self.step;
        }
        corr
    }
}

fn require_gap(spec: &dyn Spectral) -> Result<f64> {
    let l0 = spec.lambda_min();
    if !(l0 > 1e-12 * spec.lambda_max().max(1.0)) {
        return Err(Error::NoSpectralGap(l0));
    }
    Ok(l0)
}

fn check_against(route: &'static str, got: &[Complex64], exact: &[Complex64], tol: f64) -> Result<f64> {
    let dev = got
        .iter()
        .zip(exact)
        .map(|(g, e)| (g - e).norm() / e.norm().max(1.0))
        .fold(0.0, f64::max);
    if !(dev <= tol) {
        return Err(Error::OracleMismatch {
            route,
            deviation: dev,
            tolerance: tol,
        });
    }
    Ok(dev)
}

fn real_vec(v: Vec<f64>) -> Vec<Complex64> {
    v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
}

/// Lower limit `u` with `2√u e^{-c/u} <= 1e-13`.
fn subordination_lower_limit(c: f64) -> f64 {
    let mut u = c / 30.0;
    for _ in 0..60 {
        let denom = (2.0 * u.sqrt() / 1e-13).ln().max(1.0);
        u = c / denom;
    }
    u.max(f64::MIN_POSITIVE)
}

/// Effective multipliers of the subordination formula
/// `(1/√π) ∫_0^∞ e^{-u} u^{-1/2} e^{-(t²/4u) λ} du` on every eigenvalue.
pub fn subordination_multipliers(spec: &dyn Spectral, t: f64, quad_points: usize) -> Result<Vec<f64>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("subordination needs t > 0, got {t}")));
    }
    let l0 = require_gap(spec)?;
    let c = 0.25 * t * t * l0;
    let u_hi = 45.0 + 2.0 * c.sqrt();
    let u_lo = subordination_lower_limit(c).min(0.5 * u_hi);
    let rule = LogTrapezoid::new(u_lo, u_hi, quad_points)?;
    let base: Vec<f64> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&u, &w)| w * (-u).exp() * u.sqrt() / std::f64::consts::PI.sqrt())
        .collect();
    let heat_times: Vec<f64> = rule.nodes().iter().map(|&u| 0.25 * t * t / u).collect();
    Ok(spec
        .eigenvalues()
        .iter()
        .map(|&l| base.iter().zip(&heat_times).map(|(b, s)| b * (-s * l).exp()).sum())
        .collect())
}

/// `P_t f` through Bochner subordination of the heat semigroup.
pub fn poisson_subordination(
    spec: &dyn Spectral,
    t: f64,
    f: &GridFunction,
    quad_points: usize,
) -> Result<GridFunction> {
    let q = real_vec(subordination_multipliers(spec, t, quad_points)?);
    let exact = real_vec(spec.eigenvalues().iter().map(|l| (-t * l.sqrt()).exp()).collect());
    check_against("poisson_subordination", &q, &exact, ROUTE_TOL)?;
    apply_multipliers(spec, &q, f)
}

fn spectral_extent(spec: &dyn Spectral) -> Result<(f64, f64)> {
    let l0 = require_gap(spec)?;
    Ok((l0.sqrt(), spec.lambda_max().sqrt()))
}

/// `∫_0^∞ r^p G(r) dr/r` where `G(r) = e^{-r a}` is sampled on the rule
/// nodes: trapezoid, a first-order Taylor tail on `[0, r_0]` built from the
/// first two samples, and endpoint corrections.
fn power_weighted(rule: &LogTrapezoid, p: f64, g: &[f64]) -> f64 {
    let r = rule.nodes();
    let h: Vec<f64> = r.iter().zip(g).map(|(ri, gi)| ri.powf(p) * gi).collect();
    let body = rule.sum(&h);
    let slope = (g[1] - g[0]) / (r[1] - r[0]);
    let r0 = r[0];
    let tail = g[0] * r0.powf(p) / p - slope * r0.powf(p + 1.0) / (p * (p + 1.0));
    let last = h.len() - 1;
    body + tail + rule.endpoint_correction(h[0], p, h[last], 0.0)
}

/// Effective multipliers of the literal fractional-derivative integral
/// `e^{-iπ(m-β)}/Γ(m-β) ∫_0^∞ ∂_t^m P_{t+r} f r^{m-β} dr/r`.
pub fn frac_deriv_multipliers(
    spec: &dyn Spectral,
    order: &FractionalOrder,
    t: f64,
    quad_points: usize,
) -> Result<Vec<Complex64>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "fractional derivative needs t > 0, got {t}"
        )));
    }
    if order.is_integer() {
        return Err(Error::InvalidArgument(
            "integer orders have no fractional integral; use the spectral derivative".into(),
        ));
    }
    let (a_min, a_max) = spectral_extent(spec)?;
    let m = order.m() as i32;
    let p = m as f64 - order.beta();
    let rule = LogTrapezoid::new(1e-6 / a_max, 40.0 / a_min, quad_points)?;
    let prefactor = Complex64::from_polar(1.0, -std::f64::consts::PI * p) / gamma(p);
    Ok(spec
        .eigenvalues()
        .iter()
        .map(|&l| {
            let a = l.sqrt();
            let g: Vec<f64> = rule.nodes().iter().map(|r| (-r * a).exp()).collect();
            let integral = power_weighted(&rule, p, &g);
            prefactor * ((-a).powi(m) * (-t * a).exp() * integral)
        })
        .collect())
}

/// `∂_t^β P_t f` by quadrature of the defining integral. Integer orders
/// fall back to the spectral derivative.
pub fn frac_deriv_quadrature(
    spec: &dyn Spectral,
    order: &FractionalOrder,
    t: f64,
    f: &GridFunction,
    quad_points: usize,
) -> Result<GridFunction> {
    if order.is_integer() {
        return frac_deriv_poisson_spectral(spec, order, t, f);
    }
    let q = frac_deriv_multipliers(spec, order, t, quad_points)?;
    let exact: Vec<Complex64> = spec
        .eigenvalues()
        .iter()
        .map(|&l| frac_deriv_multiplier(order, t, l))
        .collect();
    check_against("frac_deriv_quadrature", &q, &exact, ROUTE_TOL)?;
    apply_multipliers(spec, &q, f)
}

/// Effective multipliers of `1/Γ(σ) ∫_0^∞ P_s s^σ ds/s`.
pub fn frac_power_neg_multipliers(spec: &dyn Spectral, sigma: f64, quad_points: usize) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "negative power needs σ in (0, 2), got {sigma}"
        )));
    }
    let (a_min, a_max) = spectral_extent(spec)?;
    let rule = LogTrapezoid::new(1e-6 / a_max, 40.0 / a_min, quad_points)?;
    let g_sigma = gamma(sigma);
    Ok(spec
        .eigenvalues()
        .iter()
        .map(|&l| {
            let a = l.sqrt();
            let g: Vec<f64> = rule.nodes().iter().map(|s| (-s * a).exp()).collect();
            power_weighted(&rule, sigma, &g) / g_sigma
        })
        .collect())
}

/// `L^{-σ/2} f`.
pub fn frac_power_neg(spec: &dyn Spectral, sigma: f64, f: &GridFunction, quad_points: usize) -> Result<GridFunction> {
    let q = real_vec(frac_power_neg_multipliers(spec, sigma, quad_points)?);
    let exact = real_vec(spec.eigenvalues().iter().map(|l| l.powf(-0.5 * sigma)).collect());
    check_against("frac_power_neg", &q, &exact, ROUTE_TOL)?;
    apply_multipliers(spec, &q, f)
}

/// Effective multipliers of `1/Γ(-σ) ∫_0^∞ (P_s - I) s^{-σ} ds/s`.
pub fn frac_power_pos_multipliers(spec: &dyn Spectral, sigma: f64, quad_points: usize) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "positive power needs σ in (0, 1), got {sigma}"
        )));
    }
    let (a_min, a_max) = spectral_extent(spec)?;
    let rule = LogTrapezoid::new(1e-6 / a_max, 40.0 / a_min, quad_points)?;
    let g_neg = gamma(-sigma);
    let s = rule.nodes();
    let (s0, s1) = (s[0], s[1]);
    let s_hi = rule.hi();
    Ok(spec
        .eigenvalues()
        .iter()
        .map(|&l| {
            let a = l.sqrt();
            let g: Vec<f64> = s.iter().map(|si| (-si * a).exp_m1()).collect();
            let h: Vec<f64> = s.iter().zip(&g).map(|(si, gi)| si.powf(-sigma) * gi).collect();
            let body = rule.sum(&h);
            // (P_s - I) ≈ A s + B s² near 0, fitted through the first two nodes.
            let det = s0 * s1 * (s1 - s0);
            let coef_a = (g[0] * s1 * s1 - g[1] * s0 * s0) / det;
            let coef_b = (g[1] * s0 - g[0] * s1) / det;
            let lower = coef_a * s0.powf(1.0 - sigma) / (1.0 - sigma) + coef_b * s0.powf(2.0 - sigma) / (2.0 - sigma);
            let upper = -s_hi.powf(-sigma) / sigma;
            let last = h.len() - 1;
            let ends = rule.endpoint_correction(h[0], 1.0 - sigma, h[last], -sigma);
            (body + lower + upper + ends) / g_neg
        })
        .collect())
}

/// `L^{σ/2} f`.
pub fn frac_power_pos(spec: &dyn Spectral, sigma: f64, f: &GridFunction, quad_points: usize) -> Result<GridFunction> {
    let q = real_vec(frac_power_pos_multipliers(spec, sigma, quad_points)?);
    let exact = real_vec(spec.eigenvalues().iter().map(|l| l.powf(0.5 * sigma)).collect());
    check_against("frac_power_pos", &q, &exact, ROUTE_TOL)?;
    apply_multipliers(spec, &q, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{eigendecompose, FourierSpectrum, DEFAULT_EIGEN_TOL};
    use crate::lattice::{build_operator, PeriodicGrid, Potential};

    fn quadratic_spec() -> crate::calculus::SpectralDecomposition {
        let g = PeriodicGrid::new(64, 8.0).unwrap();
        eigendecompose(
            &build_operator(&g, &Potential::quadratic(&g)).unwrap(),
            DEFAULT_EIGEN_TOL,
        )
        .unwrap()
    }

    #[test]
    fn log_trapezoid_integrates_exponential_power() {
        // ∫_0^∞ r^{p-1} e^{-r} dr = Γ(p), an independent closed form.
        for p in [0.1, 0.5, 0.9, 1.5] {
            let rule = LogTrapezoid::new(1e-8, 40.0, 400).unwrap();
            let g: Vec<f64> = rule.nodes().iter().map(|r| (-r).exp()).collect();
            let got = power_weighted(&rule, p, &g);
            assert!((got - gamma(p)).abs() < 1e-10 * gamma(p), "p = {p}: {got}");
        }
    }

    #[test]
    fn subordination_matches_closed_form_multipliers() {
        let spec = quadratic_spec();
        for t in [0.01, 0.1, 1.0, 10.0] {
            let q = subordination_multipliers(&spec, t, 256).unwrap();
            for (qk, l) in q.iter().zip(spec.eigenvalues()) {
                assert!((qk - (-t * l.sqrt()).exp()).abs() < 1e-10, "t = {t}, λ = {l}");
            }
        }
    }

    #[test]
    fn frac_deriv_multiplier_matches_gamma_identity() {
        let spec = quadratic_spec();
        for beta in [0.5, 1.5, 0.3, 2.7] {
            let o = FractionalOrder::new(beta).unwrap();
            let q = frac_deriv_multipliers(&spec, &o, 1.0, 512).unwrap();
            for (qk, &l) in q.iter().zip(spec.eigenvalues()) {
                // e^{iπβ} a^β e^{-a}, written out independently.
                let a = l.sqrt();
                let expect = Complex64::new((std::f64::consts::PI * beta).cos(), (std::f64::consts::PI * beta).sin())
                    * a.powf(beta)
                    * (-a).exp();
                assert!((qk - expect).norm() < 1e-9 * expect.norm().max(1.0), "β = {beta}");
            }
        }
    }

    #[test]
    fn fractional_power_multipliers() {
        let spec = quadratic_spec();
        for sigma in [0.1, 0.3, 0.7, 1.5] {
            let q = frac_power_neg_multipliers(&spec, sigma, 256).unwrap();
            for (qk, &l) in q.iter().zip(spec.eigenvalues()) {
                let expect = 1.0 / l.powf(0.5 * sigma);
                assert!((qk - expect).abs() < 1e-9 * expect.max(1.0), "σ = {sigma}");
            }
        }
        for sigma in [0.1, 0.3, 0.7, 0.95] {
            let q = frac_power_pos_multipliers(&spec, sigma, 256).unwrap();
            for (qk, &l) in q.iter().zip(spec.eigenvalues()) {
                let expect = l.powf(0.5 * sigma);
                assert!((qk - expect).abs() < 1e-9 * expect.max(1.0), "σ = {sigma}");
            }
        }
    }

    #[test]
    fn routes_reject_missing_gap_and_bad_budgets() {
        let g = PeriodicGrid::new(32, 4.0).unwrap();
        let free = FourierSpectrum::free(&g);
        let f = GridFunction::constant(&g, Complex64::new(1.0, 0.0));
        assert!(matches!(
            poisson_subordination(&free, 1.0, &f, 256),
            Err(Error::NoSpectralGap(_))
        ));
        let spec = quadratic_spec();
        let f = GridFunction::constant(spec.grid(), Complex64::new(1.0, 0.0));
        assert!(matches!(
            poisson_subordination(&spec, 1.0, &f, 8),
            Err(Error::OracleMismatch { .. })
        ));
        assert!(frac_power_pos(&spec, 1.2, &f, 256).is_err());
    }
}
