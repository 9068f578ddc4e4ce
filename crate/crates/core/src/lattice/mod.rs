//! Periodic grid, potential, the discrete operator `L = -Δ + V`, and the
//! critical radius field.

mod grid;
mod operator;
mod potential;
mod radius;

pub use grid::{Ball, BallFamily, PeriodicGrid, MIN_POINTS};
pub use operator::{build_operator, free_eigenvalue, SchrodingerOperator};
pub use potential::Potential;
pub use radius::{
    check_rho_comparability, critical_radius, reverse_holder_constant, CellIntegral, CriticalRadiusField, RHO_REL_TOL,
};
