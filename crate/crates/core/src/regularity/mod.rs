//! Function-space functionals: Hölder and growth seminorms, `BMO_L^α`,
//! tent (Carleson) functionals, growth constants, square and area functions.

mod bmo;
mod holder;
mod square;
mod tent;

pub use bmo::{ball_mean, bmo_alpha_norm, bmo_alpha_report, BmoReport};
pub use holder::{
    all_offsets, holder_report, holder_seminorm, holder_seminorm_offsets, rho_growth_seminorm, rho_growth_seminorm_at,
    second_difference_constant, sparse_offsets, HolderReport,
};
pub use square::{area_function_from_field, area_function_sbeta, square_function_from_field, square_function_gbeta};
pub use tent::{
    carleson_functional, carleson_growth_bound, growth_constant_from_profile, growth_profile, poisson_derivative_field,
    sup_growth_constant, sup_growth_constant_streaming, CarlesonReport,
};
