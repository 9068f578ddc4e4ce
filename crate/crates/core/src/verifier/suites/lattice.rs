use super::super::{Context, Curve, Tolerance, VerdictReport};
use crate::calculus::{eigendecompose, Spectral, DEFAULT_EIGEN_TOL};
use crate::lattice::{
    build_operator, check_rho_comparability, reverse_holder_constant, CriticalRadiusField, Potential,
    SchrodingerOperator,
};
use crate::Result;

const SPECTRUM_TOL: f64 = 1e-10;
const RHO_TOL: f64 = 1e-8;
const RHO_STABILITY: f64 = 0.05;
const K0: f64 = 1.0;

/// The dense eigensolver on `V ≡ μ` at twice the configured resolution
/// against `(4/h²) sin²(πk/N) + μ`.
pub fn verify_spectrum(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let grid = ctx.grid(2 * cfg.grid_n)?;
    let mut report = ctx.report("spectrum");
    let op = build_operator(&grid, &Potential::constant(&grid, cfg.mu)?)?;
    let spec = eigendecompose(&op, DEFAULT_EIGEN_TOL)?;
    let mut exact = SchrodingerOperator::constant_potential_spectrum(&grid, cfg.mu);
    exact.sort_by(f64::total_cmp);
    let mut curve = Curve::new("spectrum_constant", &["k", "computed", "closed_form"]);
    let mut worst: f64 = 0.0;
    for (k, (a, b)) in spec.eigenvalues().iter().zip(&exact).enumerate() {
        worst = worst.max((a - b).abs() / b.abs());
        curve.push(vec![k as f64, *a, *b]);
    }
    report.check(
        "constant-potential eigenvalues, max relative error",
        worst,
        Tolerance::AtMost {
            bound: ctx.tol(SPECTRUM_TOL),
        },
    );
    report.info(
        "eigenpair residual",
        spec.residual(),
        Tolerance::AtMost {
            bound: DEFAULT_EIGEN_TOL,
        },
    );
    report.info("basis Gram deviation", spec.gram_deviation(), Tolerance::Finite);
    report.curve(curve);
    Ok(report)
}

/// `ρ ≡ 1/√(2μ)` for constant potentials, and the comparability constant of
/// the configured potential under one grid doubling.
pub fn verify_radius(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let (coarse, fine) = ctx.grid_pair()?;
    let mut report = ctx.report("radius");
    let cap = 0.5 * coarse.period();
    for mu in [0.25 * cfg.mu, cfg.mu, 4.0 * cfg.mu] {
        let expect = 1.0 / (2.0 * mu).sqrt();
        if expect >= cap {
            continue;
        }
        let field = CriticalRadiusField::compute(&coarse, &Potential::constant(&coarse, mu)?, cfg.dimension)?;
        let dev = field.values.iter().map(|r| (r - expect).abs()).fold(0.0, f64::max);
        report.check(
            format!("rho for V = {mu} against 1/sqrt(2 mu)"),
            dev,
            Tolerance::AtMost {
                bound: ctx.tol(RHO_TOL),
            },
        );
    }

    let c: Vec<f64> = [coarse, fine]
        .iter()
        .map(|g| check_rho_comparability(g, &*ctx.rho(g, &cfg.potential)?, K0))
        .collect::<Result<_>>()?;
    report.stable(
        format!("comparability constant c (k0 = {K0})"),
        c[0],
        c[1],
        ctx.tol(RHO_STABILITY),
    );

    let v = Potential::from_spec(&coarse, &cfg.potential)?;
    let rh = reverse_holder_constant(&coarse, &v, 2.0, &ctx.tent_balls(&coarse, &coarse)?)?;
    report.info("reverse Hoelder constant (q = 2)", rh, Tolerance::Finite);

    let rho = ctx.rho(&coarse, &cfg.potential)?;
    let mut curve = Curve::new("rho_profile", &["x", "rho"]);
    for (j, r) in rho.values.iter().enumerate() {
        curve.push(vec![coarse.coordinate(j), *r]);
    }
    report.curve(curve);
    Ok(report)
}
