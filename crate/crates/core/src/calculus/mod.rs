//! Spectral decomposition of `L` and the functional calculus built on it.
//!
//! The spectral route is the source of truth; the quadrature routes in
//! [`quadrature`] and [`multiplier`] are checked against it.

pub mod multiplier;
pub mod quadrature;
mod semigroup;
mod spectral;
mod types;

pub use multiplier::{laplace_multiplier, MultiplierProfile};
pub use quadrature::{frac_deriv_quadrature, frac_power_neg, frac_power_pos, poisson_subordination};
pub use semigroup::{
    apply_function, apply_multipliers, classical_poisson_apply, frac_deriv_multiplier, frac_deriv_poisson_spectral,
    heat_apply, heat_kernel, multipliers, poisson_kernel, poisson_spectral, q_kernel,
};
pub use spectral::{
    eigendecompose, spectrum_for, FourierSpectrum, Spectral, SpectralDecomposition, DEFAULT_EIGEN_TOL, GRAM_TOL,
};
pub use types::{FractionalOrder, GridFunction, SpacetimeField, TimeGrid};
