use super::super::{Context, Curve, Tolerance, VerdictReport};
use super::least_squares;
use crate::calculus::{FourierSpectrum, FractionalOrder, TimeGrid};
use crate::lattice::PeriodicGrid;
use crate::regularity::{
    carleson_functional, carleson_growth_bound, holder_seminorm_offsets, poisson_derivative_field,
    second_difference_constant, sparse_offsets, sup_growth_constant, sup_growth_constant_streaming,
};
use crate::testfns::{holder_cusp, weierstrass};
use crate::Result;

pub(crate) const TRUNCATIONS: [u32; 3] = [4, 8, 16];
const BETA: f64 = 2.0;
const ALPHA: f64 = 1.0;
const UNIFORMITY: f64 = 0.15;
const LIPSCHITZ_GROWTH: f64 = 1.8;
const WEIERSTRASS_PERIOD: f64 = 1.0;
const TIMES_PER_DECADE: f64 = 24.0;
const DENSE_OFFSETS: usize = 64;
const OFFSET_GROWTH: f64 = 0.05;

/// Smallest power-of-two grid on which `K` terms sit at or below a quarter
/// of the Nyquist band.
pub(crate) fn weierstrass_points(k_max: u32, period: f64) -> usize {
    let need = 4.0 * 2f64.powi(k_max as i32) * period;
    (need.max(16.0) as usize).next_power_of_two()
}

/// `max / min - 1`.
fn variation(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::MIN, f64::max);
    let min = v.iter().copied().fold(f64::MAX, f64::min);
    max / min - 1.0
}

/// The `α = 1` counterexample under `V ≡ μ`: Weierstrass truncations keep a
/// bounded Poisson growth constant and bounded second differences while the
/// Lipschitz constant grows with the number of terms.
pub fn verify_thm14(ctx: &Context) -> Result<VerdictReport> {
    let cfg = ctx.config();
    let k_max = *TRUNCATIONS.iter().max().expect("nonempty");
    let grid = PeriodicGrid::new(weierstrass_points(k_max, WEIERSTRASS_PERIOD), WEIERSTRASS_PERIOD)?;
    let spec = FourierSpectrum::constant(&grid, cfg.mu)?;
    let order = FractionalOrder::new(BETA)?;
    let h = grid.spacing();
    let (t_lo, t_hi) = (1e-2 * h, WEIERSTRASS_PERIOD);
    let count = (TIMES_PER_DECADE * (t_hi / t_lo).log10()).ceil() as usize;
    let tgrid = TimeGrid::log_uniform(t_lo, t_hi, count)?;
    let offsets = sparse_offsets(grid.len(), DENSE_OFFSETS, OFFSET_GROWTH);

    let mut report = ctx.report("thm14");
    let mut curve = Curve::new("thm14_truncations", &["K", "c1", "second_difference", "lipschitz"]);
    let (mut c1, mut second, mut lip) = (Vec::new(), Vec::new(), Vec::new());
    for &k in &TRUNCATIONS {
        let f = weierstrass(&grid, k)?;
        c1.push(sup_growth_constant_streaming(&spec, &order, &f, &tgrid, ALPHA)?);
        second.push(second_difference_constant(&f, ALPHA, &offsets)?);
        lip.push(holder_seminorm_offsets(&f, ALPHA, &offsets)?.0);
        curve.push(vec![
            k as f64,
            c1[c1.len() - 1],
            second[second.len() - 1],
            lip[lip.len() - 1],
        ]);
    }
    for (i, k) in TRUNCATIONS.iter().enumerate() {
        report.info(format!("K={k} c1 (beta = 2, alpha = 1)"), c1[i], Tolerance::Finite);
        report.info(
            format!("K={k} second-difference constant"),
            second[i],
            Tolerance::Finite,
        );
        report.info(format!("K={k} Lipschitz constant"), lip[i], Tolerance::Finite);
    }
    let bound = Tolerance::AtMost {
        bound: ctx.tol(UNIFORMITY),
    };
    report.check("c1 variation across K (max/min - 1)", variation(&c1), bound);
    report.check(
        "second-difference variation across K (max/min - 1)",
        variation(&second),
        bound,
    );
    let i8 = TRUNCATIONS.iter().position(|&k| k == 8).expect("K = 8 present");
    let i16 = TRUNCATIONS.iter().position(|&k| k == 16).expect("K = 16 present");
    report.check(
        "Lipschitz ratio K=16 over K=8",
        lip[i16] / lip[i8],
        Tolerance::AtLeast {
            bound: LIPSCHITZ_GROWTH,
        },
    );
    let increasing = lip.windows(2).all(|w| w[1] > w[0]);
    report.check(
        "Lipschitz constant increases with K",
        if increasing { 1.0 } else { 0.0 },
        Tolerance::AtLeast { bound: 1.0 },
    );
    let ks: Vec<f64> = TRUNCATIONS.iter().map(|&k| k as f64).collect();
    let (_, rate) = least_squares(&ks, &lip);
    report.info(
        "fitted Lipschitz growth per added term",
        rate,
        Tolerance::AtLeast { bound: 0.0 },
    );

    // The Carleson bound at α = 1 for a Lipschitz member of the family.
    let (coarse, fine) = ctx.grid_pair()?;
    let tg = ctx.time_grid(&coarse)?;
    let mut carleson = Vec::new();
    for g in [coarse, fine] {
        let spec = ctx.spectrum(&g, &ctx.constant_potential())?;
        let f = holder_cusp(&g, 1.0)?;
        let field = poisson_derivative_field(spec.as_ref(), &order, &f, &tg)?;
        let balls = ctx.tent_balls(&coarse, &g)?;
        let rep = carleson_functional(&field, ALPHA, BETA, &balls)?;
        let c1 = sup_growth_constant(&field, ALPHA)?;
        let slack = balls
            .balls()
            .iter()
            .zip(&rep.per_ball)
            .filter_map(|(b, v)| v.map(|v| v / carleson_growth_bound(c1, ALPHA, &tg, b.radius)))
            .fold(0.0, f64::max);
        report.info(
            format!("Lipschitz cusp at N={}: Carleson over growth bound", g.len()),
            slack,
            Tolerance::AtMost { bound: 1.0 + 1e-12 },
        );
        carleson.push(rep.supremum);
    }
    report.stable(
        "Lipschitz cusp Carleson constant (alpha = 1, beta = 2)",
        carleson[0],
        carleson[1],
        ctx.stability(),
    );
    report.curve(curve);
    Ok(report)
}
