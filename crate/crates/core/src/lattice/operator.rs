use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{PeriodicGrid, Potential};
use crate::Result;

/// `L = -Δ + V` discretized with the periodic three-point stencil.
///
/// Stored in cyclic-tridiagonal form; [`SchrodingerOperator::to_dense`]
/// materializes the full symmetric matrix.
#[derive(Debug, Clone)]
pub struct SchrodingerOperator {
    grid: PeriodicGrid,
    potential: Potential,
    diagonal: Vec<f64>,
    off_diagonal: f64,
}

pub fn build_operator(grid: &PeriodicGrid, v: &Potential) -> Result<SchrodingerOperator> {
    v.check_grid(grid)?;
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let diagonal = v.samples().iter().map(|&vj| 2.0 * inv_h2 + vj).collect();
    Ok(SchrodingerOperator {
        grid: *grid,
        potential: v.clone(),
        diagonal,
        off_diagonal: -inv_h2,
    })
}

impl SchrodingerOperator {
    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> f64 {
        self.off_diagonal
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.grid.len();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            m[(j, j)] = self.diagonal[j];
            let next = (j + 1) % n;
            m[(j, next)] = self.off_diagonal;
            m[(next, j)] = self.off_diagonal;
        }
        m
    }

    /// `(L f)_j` in O(N).
    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.len();
        (0..n)
            .map(|j| {
                let prev = f[(j + n - 1) % n];
                let next = f[(j + 1) % n];
                f[j] * self.diagonal[j] + (prev + next) * self.off_diagonal
            })
            .collect()
    }

    /// Same as [`apply`](Self::apply) for real vectors.
    pub fn apply_real(&self, f: &[f64]) -> Vec<f64> {
        let n = self.grid.len();
        (0..n)
            .map(|j| {
                let prev = f[(j + n - 1) % n];
                let next = f[(j + 1) % n];
                f[j] * self.diagonal[j] + (prev + next) * self.off_diagonal
            })
            .collect()
    }

    /// Closed-form spectrum of the constant-potential operator
    /// `(4/h²) sin²(πk/N) + μ`, sorted ascending.
    pub fn constant_potential_spectrum(grid: &PeriodicGrid, mu: f64) -> Vec<f64> {
        let mut ev: Vec<f64> = (0..grid.len()).map(|k| free_eigenvalue(grid, k) + mu).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Eigenvalue of the periodic second-difference Laplacian for Fourier mode `k`.
#[inline]
pub fn free_eigenvalue(grid: &PeriodicGrid, k: usize) -> f64 {
    let h = grid.spacing();
    let s = (std::f64::consts::PI * k as f64 / grid.len() as f64).sin();
    4.0 / (h * h) * s * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_potential_gives_laplacian_with_zero_row_sums() {
        let g = PeriodicGrid::new(16, 2.0).unwrap();
        let op = build_operator(&g, &Potential::constant(&g, 0.0).unwrap()).unwrap();
        let m = op.to_dense();
        for i in 0..16 {
            let s: f64 = m.row(i).iter().sum();
            assert!(s.abs() < 1e-9);
        }
    }

    #[test]
    fn dense_matrix_is_exactly_symmetric_with_nonpositive_offdiagonal() {
        let g = PeriodicGrid::new(24, 3.0).unwrap();
        let op = build_operator(&g, &Potential::quadratic(&g)).unwrap();
        let m = op.to_dense();
        assert_eq!((&m - m.transpose()).amax(), 0.0);
        for i in 0..24 {
            for j in 0..24 {
                if i != j {
                    assert!(m[(i, j)] <= 0.0);
                }
            }
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let g = PeriodicGrid::new(16, 2.0).unwrap();
        let g2 = PeriodicGrid::new(32, 2.0).unwrap();
        assert!(build_operator(&g, &Potential::quadratic(&g2)).is_err());
    }

    #[test]
    fn stencil_apply_matches_dense_product() {
        let g = PeriodicGrid::new(20, 2.0).unwrap();
        let op = build_operator(&g, &Potential::quadratic(&g)).unwrap();
        let f: Vec<f64> = (0..20).map(|j| (j as f64 * 0.7).sin()).collect();
        let dense = op.to_dense() * nalgebra::DVector::from_vec(f.clone());
        let fast = op.apply_real(&f);
        for (a, b) in dense.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
