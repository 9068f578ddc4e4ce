use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::GridFunction;
use crate::lattice::{free_eigenvalue, PeriodicGrid, SchrodingerOperator};
use crate::{Error, Result};

/// Default residual tolerance passed to [`eigendecompose`].
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

/// Gram-matrix deviation allowed for the eigenvector basis.
pub const GRAM_TOL: f64 = 1e-10;

/// An orthonormal eigenbasis of `L` in the inner product `h Σ f ḡ`.
///
/// Coefficients are `c_k = ⟨f, e_k⟩`, eigenvalues ascend.
pub trait Spectral: Send + Sync {
    fn grid(&self) -> &PeriodicGrid;

    fn eigenvalues(&self) -> &[f64];

    fn analyze(&self, f: &GridFunction) -> Result<Vec<Complex64>>;

    fn synthesize(&self, coeffs: &[Complex64]) -> GridFunction;

    fn lambda_min(&self) -> f64 {
        self.eigenvalues()[0]
    }

    fn lambda_max(&self) -> f64 {
        *self.eigenvalues().last().expect("nonempty spectrum")
    }

    fn len(&self) -> usize {
        self.eigenvalues().len()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn eigenvector(&self, k: usize) -> Result<GridFunction> {
        let len = self.len();
        if k >= len {
            return Err(Error::ModeOutOfRange { index: k, len });
        }
        let mut c = vec![Complex64::new(0.0, 0.0); len];
        c[k] = Complex64::new(1.0, 0.0);
        Ok(self.synthesize(&c))
    }

    /// Kernel `K(x_i, x_j) = Σ_k φ(λ_k) e_k(x_i) conj(e_k(x_j))`, so that
    /// `φ(L) f (x_i) = h Σ_j K(x_i, x_j) f_j`. Only the real part is kept.
    fn kernel(&self, phi: &dyn Fn(f64) -> f64) -> Result<DMatrix<f64>> {
        let grid = *self.grid();
        let n = grid.len();
        let mult = real_multipliers(self.eigenvalues(), phi)?;
        let mut k = DMatrix::zeros(n, n);
        let inv_h = Complex64::new(1.0 / grid.spacing(), 0.0);
        for j in 0..n {
            let mut delta = GridFunction::zeros(&grid);
            delta.samples_mut()[j] = inv_h;
            let mut c = self.analyze(&delta)?;
            for (ck, m) in c.iter_mut().zip(&mult) {
                *ck *= m;
            }
            let col = self.synthesize(&c);
            for (i, z) in col.samples().iter().enumerate() {
                k[(i, j)] = z.re;
            }
        }
        Ok(k)
    }
}

fn real_multipliers(eigenvalues: &[f64], phi: &dyn Fn(f64) -> f64) -> Result<Vec<f64>> {
    eigenvalues
        .iter()
        .map(|&l| {
            let m = phi(l);
            if m.is_finite() {
                Ok(m)
            } else {
                Err(Error::NonFiniteMultiplier(l))
            }
        })
        .collect()
}

/// Dense eigensystem of the operator matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    grid: PeriodicGrid,
    eigenvalues: Vec<f64>,
    /// Columns are Euclidean-orthonormal; `e_k = u_k / √h`.
    basis: DMatrix<f64>,
    residual: f64,
    gram_deviation: f64,
}

/// Diagonalizes `op` and checks the residual (`≤ tol·max(1, λ_max)`), the
/// Gram deviation and `λ_0 ≥ min V`.
pub fn eigendecompose(op: &SchrodingerOperator, tol: f64) -> Result<SpectralDecomposition> {
    let grid = *op.grid();
    let n = grid.len();
    let eig = SymmetricEigen::try_new(op.to_dense(), f64::EPSILON, 0).ok_or(Error::EigenConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));

    let mut basis = DMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        // Fix the sign so that the largest-magnitude entry is positive.
        let pivot = col
            .iter()
            .copied()
            .fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
        if pivot < 0.0 {
            col.neg_mut();
        }
        basis.set_column(dst, &col);
        eigenvalues.push(eig.eigenvalues[src]);
    }

    let lambda_max = eigenvalues[n - 1].abs().max(1.0);
    let residual = (0..n)
        .map(|k| {
            let u: Vec<f64> = basis.column(k).iter().copied().collect();
            let lu = op.apply_real(&u);
            lu.iter()
                .zip(&u)
                .map(|(a, b)| (a - eigenvalues[k] * b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    if !(residual <= tol * lambda_max) {
        return Err(Error::SpectralInvariant(format!(
            "eigen residual {residual:e} exceeds {:e}",
            tol * lambda_max
        )));
    }
    let gram = basis.tr_mul(&basis) - DMatrix::<f64>::identity(n, n);
    let gram_deviation = gram.amax();
    if !(gram_deviation <= GRAM_TOL) {
        return Err(Error::SpectralInvariant(format!(
            "eigenvector Gram deviation {gram_deviation:e} exceeds {GRAM_TOL:e}"
        )));
    }

    let v_min = op.potential().min();
    let slack = 64.0 * f64::EPSILON * lambda_max;
    if eigenvalues[0] < v_min - slack {
        return Err(Error::SpectralInvariant(format!(
            "smallest eigenvalue {:e} below min V = {v_min:e}",
            eigenvalues[0]
        )));
    }
    for l in eigenvalues.iter_mut() {
        if *l < 0.0 {
            *l = 0.0;
        }
    }

    Ok(SpectralDecomposition {
        grid,
        eigenvalues,
        basis,
        residual,
        gram_deviation,
    })
}

impl SpectralDecomposition {
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn gram_deviation(&self) -> f64 {
        self.gram_deviation
    }

    /// Euclidean-orthonormal eigenvector matrix (columns ascending in `λ`).
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }
}

impl Spectral for SpectralDecomposition {
    fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    fn analyze(&self, f: &GridFunction) -> Result<Vec<Complex64>> {
        if f.grid() != &self.grid {
            return Err(Error::SizeMismatch {
                expected: self.grid.len(),
                found: f.len(),
            });
        }
        let sqrt_h = self.grid.spacing().sqrt();
        let re = DVector::from_iterator(f.len(), f.samples().iter().map(|z| z.re));
        let im = DVector::from_iterator(f.len(), f.samples().iter().map(|z| z.im));
        let cr = self.basis.tr_mul(&re);
        let ci = self.basis.tr_mul(&im);
        Ok(cr
            .iter()
            .zip(ci.iter())
            .map(|(a, b)| Complex64::new(*a, *b) * sqrt_h)
            .collect())
    }

    fn synthesize(&self, coeffs: &[Complex64]) -> GridFunction {
        let inv_sqrt_h = 1.0 / self.grid.spacing().sqrt();
        let n = self.grid.len();
        let cr = DVector::from_iterator(n, coeffs.iter().map(|z| z.re));
        let ci = DVector::from_iterator(n, coeffs.iter().map(|z| z.im));
        let fr = &self.basis * cr;
        let fi = &self.basis * ci;
        let samples = fr
            .iter()
            .zip(fi.iter())
            .map(|(a, b)| Complex64::new(*a, *b) * inv_sqrt_h)
            .collect();
        GridFunction::new(&self.grid, samples).expect("basis matches grid")
    }

    fn kernel(&self, phi: &dyn Fn(f64) -> f64) -> Result<DMatrix<f64>> {
        let mult = real_multipliers(&self.eigenvalues, phi)?;
        let mut scaled = self.basis.clone();
        for (k, m) in mult.iter().enumerate() {
            scaled.column_mut(k).scale_mut(*m);
        }
        Ok(scaled * self.basis.transpose() / self.grid.spacing())
    }
}

/// Exact diagonalization of `-Δ + μ` by the discrete Fourier transform.
///
/// Needed where dense eigensolves are out of reach (the Weierstrass suite runs
/// at `N = 2^18`).
#[derive(Clone)]
pub struct FourierSpectrum {
    grid: PeriodicGrid,
    mu: f64,
    eigenvalues: Vec<f64>,
    /// FFT bin of the `p`-th eigenvalue in ascending order.
    bins: Vec<usize>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FourierSpectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierSpectrum")
            .field("grid", &self.grid)
            .field("mu", &self.mu)
            .finish()
    }
}

impl FourierSpectrum {
    pub fn constant(grid: &PeriodicGrid, mu: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::InvalidPotential(format!(
                "constant potential must be finite and nonnegative, got {mu}"
            )));
        }
        let n = grid.len();
        let raw: Vec<f64> = (0..n).map(|k| free_eigenvalue(grid, k) + mu).collect();
        let mut bins: Vec<usize> = (0..n).collect();
        bins.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]).then(a.cmp(&b)));
        let eigenvalues = bins.iter().map(|&b| raw[b]).collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            grid: *grid,
            mu,
            eigenvalues,
            bins,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    /// The free Laplacian (`V ≡ 0`).
    pub fn free(grid: &PeriodicGrid) -> Self {
        Self::constant(grid, 0.0).expect("zero potential is valid")
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// FFT bin (Fourier index `k`) of the `p`-th eigenvalue.
    pub fn bin(&self, p: usize) -> usize {
        self.bins[p]
    }
}

impl Spectral for FourierSpectrum {
    fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    fn analyze(&self, f: &GridFunction) -> Result<Vec<Complex64>> {
        if f.grid() != &self.grid {
            return Err(Error::SizeMismatch {
                expected: self.grid.len(),
                found: f.len(),
            });
        }
        let mut buf = f.samples().to_vec();
        self.forward.process(&mut buf);
        let scale = self.grid.spacing() / self.grid.period().sqrt();
        Ok(self.bins.iter().map(|&b| buf[b] * scale).collect())
    }

    fn synthesize(&self, coeffs: &[Complex64]) -> GridFunction {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (c, &b) in coeffs.iter().zip(&self.bins) {
            buf[b] = *c;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.grid.period().sqrt();
        for z in buf.iter_mut() {
            *z *= scale;
        }
        GridFunction::new(&self.grid, buf).expect("buffer matches grid")
    }
}

/// Fourier backend for constant potentials, dense eigensolve otherwise.
pub fn spectrum_for(op: &SchrodingerOperator) -> Result<Box<dyn Spectral>> {
    match op.potential().constant_value() {
        Some(mu) => Ok(Box::new(FourierSpectrum::constant(op.grid(), mu)?)),
        None => Ok(Box::new(eigendecompose(op, DEFAULT_EIGEN_TOL)?)),
    }
}
