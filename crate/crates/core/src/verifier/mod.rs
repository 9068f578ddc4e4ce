//! Theorem suites. Each suite assembles lattice, calculus and regularity
//! routines into a [`VerdictReport`] whose checks carry the numbers behind
//! the verdict.

mod config;
mod context;
mod report;
mod suites;

pub use config::SuiteConfig;
pub use context::{tent_balls, Context};
pub use report::{refinement_ratio, CheckRecord, Curve, Tolerance, VerdictReport, SCHEMA_VERSION};
pub use suites::{
    verify_growth_lemma21, verify_growth_order_independence, verify_kernel_bounds, verify_oracles, verify_radius,
    verify_reproducing, verify_spectrum, verify_thm12, verify_thm13, verify_thm14, verify_thm15,
    verify_zygmund_equivalence,
};

use rayon::prelude::*;

use crate::{Error, Result};

/// Names accepted by [`run_suite`], in declaration order.
pub const SUITES: &[&str] = &[
    "oracles",
    "spectrum",
    "radius",
    "kernels",
    "reproducing",
    "thm12",
    "thm13",
    "thm14",
    "thm15",
    "lemma56",
    "zygmund",
    "lemma21",
];

pub fn describe_suite(name: &str) -> Option<&'static str> {
    Some(match name {
        "oracles" => "quadrature routes against spectral closed forms on random probes",
        "spectrum" => "dense eigensolver against the closed-form spectrum of V ≡ μ",
        "radius" => "critical radius closed form and comparability constant",
        "kernels" => "heat and Poisson kernel envelopes, row sums under V ≡ μ",
        "reproducing" => "square-function isometry constant and reproducing formula",
        "thm12" => "fractional powers and Laplace multipliers on Hölder spaces",
        "thm13" => "Hölder norm, Poisson growth constant and Carleson constant",
        "thm14" => "Weierstrass counterexample at α = 1 under V ≡ μ",
        "thm15" => "Carleson/BMO comparison at α = 0 and the logarithmic bump",
        "lemma56" => "growth constants for two derivative orders",
        "zygmund" => "second differences against L- and classical Poisson growth",
        "lemma21" => "decay of the fractional derivative of ρ-bounded data",
        _ => return None,
    })
}

pub fn run_suite(ctx: &Context, name: &str) -> Result<VerdictReport> {
    match name {
        "oracles" => verify_oracles(ctx),
        "spectrum" => verify_spectrum(ctx),
        "radius" => verify_radius(ctx),
        "kernels" => verify_kernel_bounds(ctx),
        "reproducing" => verify_reproducing(ctx),
        "thm12" => verify_thm12(ctx),
        "thm13" => verify_thm13(ctx),
        "thm14" => verify_thm14(ctx),
        "thm15" => verify_thm15(ctx),
        "lemma56" => verify_growth_order_independence(ctx),
        "zygmund" => verify_zygmund_equivalence(ctx),
        "lemma21" => verify_growth_lemma21(ctx),
        _ => Err(Error::Config(format!(
            "unknown suite {name:?}; known: {}",
            SUITES.join(", ")
        ))),
    }
}

/// Runs the suites concurrently and returns the reports in request order.
pub fn run_suites(ctx: &Context, names: &[String]) -> Result<Vec<VerdictReport>> {
    for n in names {
        if !SUITES.contains(&n.as_str()) {
            return Err(Error::Config(format!("unknown suite {n:?}")));
        }
    }
    // Build the shared spectra once up front so concurrent suites do not
    // each pay for the same dense eigensolve.
    let (coarse, fine) = ctx.grid_pair()?;
    let potentials = [ctx.config().potential.clone(), ctx.constant_potential()];
    let jobs: Vec<_> = [coarse, fine]
        .into_iter()
        .flat_map(|g| potentials.iter().map(move |p| (g, p)))
        .collect();
    jobs.par_iter()
        .try_for_each(|(g, p)| ctx.spectrum(g, p).and(ctx.rho(g, p)).map(drop))?;
    names.par_iter().map(|n| run_suite(ctx, n)).collect()
}
