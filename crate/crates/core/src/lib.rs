//! Numerical functional calculus for one-dimensional periodic Schrödinger
//! operators `L = -Δ + V`.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] discretizes the torus, assembles `L` and computes the
//!   critical radius field `ρ`.
//! * [`calculus`] diagonalizes `L` and evaluates heat and Poisson semigroups,
//!   their kernels, fractional time derivatives, fractional powers and
//!   Laplace-transform multipliers, each through an exact spectral route and
//!   an independent quadrature route.
//! * [`regularity`] holds the function-space functionals (Hölder, `BMO_L^α`,
//!   Carleson tents, square and area functions).
//! * [`testfns`] builds the canonical inputs.
//! * [`verifier`] assembles everything into reproducible theorem suites.
//! * [`cli`] is the batch front end used by the `schcalc` binary.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod cli;
mod error;
pub mod lattice;
pub mod regularity;
pub mod testfns;
pub mod verifier;

pub use error::{Error, Result};

pub use num_complex::Complex64;
