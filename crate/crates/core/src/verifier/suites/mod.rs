mod kernels;
mod lattice;
mod lemmas;
mod oracles;
mod reproducing;
mod thm12;
mod thm13;
mod thm14;
mod thm15;

pub use kernels::verify_kernel_bounds;
pub use lattice::{verify_radius, verify_spectrum};
pub use lemmas::{verify_growth_lemma21, verify_growth_order_independence, verify_zygmund_equivalence};
pub use oracles::verify_oracles;
pub use reproducing::verify_reproducing;
pub use thm12::verify_thm12;
pub use thm13::verify_thm13;
pub use thm14::verify_thm14;
pub use thm15::verify_thm15;

/// Smallest and largest ratio `a/b` over ordered pairs. Two zeros compare
/// equal; a zero against a nonzero value gives `0` and `∞`.
pub(super) fn ratio_band(v: &[f64]) -> (f64, f64) {
    let max = v.iter().copied().fold(f64::MIN, f64::max);
    let min = v.iter().copied().fold(f64::MAX, f64::min);
    if v.is_empty() || max == min {
        return (1.0, 1.0);
    }
    if min <= 0.0 {
        return (0.0, f64::INFINITY);
    }
    (min / max, max / min)
}

/// Ordinary least squares `y ≈ a + b x`, returned as `(a, b)`.
pub(super) fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}
