//! The discretised space–time sampling operator.
//!
//! Rows are indexed by `(λ, u_i)` in λ-major order, columns by spectrum
//! nodes `t_j`. Entry `w_j·Φ_{u_i}(t_j)·e^{iλt_j}/(2π)` maps a spectrum to
//! the samples `(f ∗ φ_{u_i})(λ)`. Frame bounds are read off the
//! normalised matrix `diag(√w_u)·M·diag(1/√(w_j/2π))`, whose column space
//! carries the Plancherel norm, so its squared singular values estimate the
//! constants `A ≤ B` in `A‖f‖² ≤ ∫_I Σ_λ |(f ∗ φ_u)(λ)|² du ≤ B‖f‖²`.
//!
//! With a finite window the model is only faithful when the spectrum grid
//! is matched to the window ([`SpectrumGrid::periodic`]); a much finer grid
//! leaves unobserved directions and forces `A = 0` for every set.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bandlimited::{cis, BandlimitedFn, Signal, SpectrumGrid};
use crate::error::{invalid, Error, Result};
use crate::kernels::{singular_values, KernelFamily};
use crate::quadrature::legendre;
use crate::sampling_sets::SamplingSet;

/// Relative threshold below which `A_hat` counts as zero.
pub const NEAR_ZERO: f64 = 1e-12;

/// Default regularization relative to `B_hat`.
pub const DEFAULT_REG_FACTOR: f64 = 1e-9;

/// Default cap on the dense matrix size in bytes.
pub const DEFAULT_MEMORY_CAP: usize = 1 << 30;

/// Row label of the operator.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RowMeta {
    /// Sampling point.
    pub lambda: f64,
    /// Kernel parameter.
    pub u: f64,
    /// Index of `lambda` in the sampling set.
    pub point_index: usize,
    /// Index of `u` in the family's grid.
    pub u_index: usize,
}

/// Dense sampling operator for one set, kernel family and spectrum grid.
#[derive(Debug, Clone)]
pub struct SamplingOperator {
    matrix: DMatrix<Complex64>,
    row_weights: Vec<f64>,
    rows: Vec<RowMeta>,
    grid: SpectrumGrid,
    set: SamplingSet,
    family: KernelFamily,
}

/// Frame-bound estimate.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameReport {
    /// Smallest squared singular value (0 when rows < columns).
    pub a_hat: f64,
    /// Largest squared singular value.
    pub b_hat: f64,
    /// Singular values of the normalised operator, decreasing.
    pub singular_values: Vec<f64>,
    /// `B_hat / A_hat`, infinite when `A_hat` is near zero.
    pub condition_number: f64,
    /// `A_hat <= 1e-12·B_hat`.
    pub near_zero: bool,
}

/// Settings for [`SamplingOperator::reconstruct`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReconstructParams {
    /// Tikhonov weight; `None` means `1e-9·B_hat`.
    pub regularization: Option<f64>,
    /// Stop when the normal-equation residual drops below `tol·‖M^H y‖`.
    pub tol: f64,
    /// Iteration cap.
    pub max_iter: usize,
}

impl Default for ReconstructParams {
    fn default() -> Self {
        Self {
            regularization: None,
            tol: 1e-12,
            max_iter: 5000,
        }
    }
}

/// Output of [`SamplingOperator::reconstruct`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    /// Recovered spectrum.
    pub recovered: BandlimitedFn,
    /// `‖f_rec - f‖₂ / ‖f‖₂` when a ground truth was supplied.
    pub relative_l2_error: Option<f64>,
    /// Final `√(‖weighted residual‖² + reg·‖f_rec‖²)`.
    pub residual_norm: f64,
    /// The same quantity after every iteration, starting with the initial
    /// guess; nonincreasing.
    pub residual_history: Vec<f64>,
    /// Iterations performed.
    pub iterations: usize,
    /// Regularization actually used.
    pub regularization: f64,
    /// False if `max_iter` was reached first.
    pub converged: bool,
}

impl SamplingOperator {
    /// Assembles the operator under [`DEFAULT_MEMORY_CAP`].
    pub fn assemble(set: &SamplingSet, family: &KernelFamily, grid: SpectrumGrid) -> Result<Self> {
        Self::assemble_with_cap(set, family, grid, DEFAULT_MEMORY_CAP)
    }

    /// Assembles the operator, refusing matrices larger than `cap` bytes.
    pub fn assemble_with_cap(
        set: &SamplingSet,
        family: &KernelFamily,
        grid: SpectrumGrid,
        cap: usize,
    ) -> Result<Self> {
        let n_u = family.u_nodes().len();
        let rows = set.len() * n_u;
        let cols = grid.len();
        let bytes = rows
            .saturating_mul(cols)
            .saturating_mul(core::mem::size_of::<Complex64>());
        if bytes > cap {
            return Err(Error::Size {
                rows,
                cols,
                bytes,
                cap,
            });
        }
        let nodes = grid.nodes();
        let w = grid.weights();
        // phi[i][j] = w_j Φ_{u_i}(t_j) / 2π
        let mut phi = Vec::with_capacity(n_u);
        for &u in family.u_nodes() {
            let mut r = Vec::with_capacity(cols);
            for (t, wj) in nodes.iter().zip(&w) {
                r.push(wj * family.transform(u, *t)? / (2.0 * PI));
            }
            phi.push(r);
        }
        let mut matrix = DMatrix::<Complex64>::zeros(rows, cols);
        let mut meta = Vec::with_capacity(rows);
        let mut row_weights = Vec::with_capacity(rows);
        for (p, &lambda) in set.points().iter().enumerate() {
            let waves: Vec<Complex64> = nodes.iter().map(|t| cis(lambda * t)).collect();
            for (i, (&u, &wu)) in family.u_nodes().iter().zip(family.u_weights()).enumerate() {
                let row = p * n_u + i;
                for j in 0..cols {
                    matrix[(row, j)] = waves[j] * phi[i][j];
                }
                meta.push(RowMeta {
                    lambda,
                    u,
                    point_index: p,
                    u_index: i,
                });
                row_weights.push(libm::sqrt(wu));
            }
        }
        Ok(Self {
            matrix,
            row_weights,
            rows: meta,
            grid,
            set: set.clone(),
            family: family.clone(),
        })
    }

    /// Raw matrix `w_j·Φ_{u_i}(t_j)·e^{iλt_j}/(2π)`.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `√(u-weight)` per row.
    pub fn row_weights(&self) -> &[f64] {
        &self.row_weights
    }

    /// Row labels.
    pub fn rows(&self) -> &[RowMeta] {
        &self.rows
    }

    /// Spectrum grid of the columns.
    pub fn grid(&self) -> &SpectrumGrid {
        &self.grid
    }

    /// Sampling set of the rows.
    pub fn set(&self) -> &SamplingSet {
        &self.set
    }

    /// Kernel family of the rows.
    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    /// Samples `(f ∗ φ_u)(λ)` of a spectrum on the operator grid.
    pub fn apply(&self, f: &BandlimitedFn) -> Result<Vec<Complex64>> {
        if *f.grid() != self.grid {
            return Err(invalid("signal grid differs from the operator grid"));
        }
        let x = nalgebra::DVector::from_column_slice(f.values());
        Ok((&self.matrix * x).iter().copied().collect())
    }

    /// Samples of any [`Signal`], computed by the signal itself rather than
    /// through the matrix. Row order matches [`Self::rows`].
    pub fn samples_of<S: Signal + ?Sized>(&self, signal: &S) -> Result<Vec<Complex64>> {
        let n_u = self.family.u_nodes().len();
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); self.rows.len()];
        for (i, &u) in self.family.u_nodes().iter().enumerate() {
            let vals = signal.convolved(&self.family, u, self.set.points())?;
            for (p, v) in vals.into_iter().enumerate() {
                out[p * n_u + i] = v;
            }
        }
        Ok(out)
    }

    /// `diag(√w_u)·M·diag(1/√(w_j/2π))`.
    pub fn normalized(&self) -> DMatrix<Complex64> {
        let scale: Vec<f64> = self
            .grid
            .weights()
            .iter()
            .map(|w| 1.0 / libm::sqrt(w / (2.0 * PI)))
            .collect();
        let mut m = self.matrix.clone();
        for (r, rw) in self.row_weights.iter().enumerate() {
            for (c, s) in scale.iter().enumerate() {
                m[(r, c)] *= rw * s;
            }
        }
        m
    }

    /// Frame bounds from the singular values of [`Self::normalized`].
    pub fn frame_bounds(&self) -> Result<FrameReport> {
        let sv = singular_values(self.normalized())?;
        let b_hat = sv.first().map_or(0.0, |s| s * s);
        let a_hat = if self.matrix.nrows() < self.matrix.ncols() {
            0.0
        } else {
            sv.last().map_or(0.0, |s| s * s)
        };
        let near_zero = a_hat <= NEAR_ZERO * b_hat;
        Ok(FrameReport {
            a_hat,
            b_hat,
            singular_values: sv,
            condition_number: if near_zero {
                f64::INFINITY
            } else {
                b_hat / a_hat
            },
            near_zero,
        })
    }

    /// Bessel constant of the operator's set on its grid.
    pub fn bessel_constant(&self) -> Result<f64> {
        bessel_constant(&self.set, &self.grid)
    }

    /// Upper frame bound `sup_u Φ_u(0)² · Bessel(Λ) · |I|`.
    pub fn upper_bound_estimate(&self) -> Result<f64> {
        let (lo, _) = self.family.interval();
        // Φ_u(0) = ‖φ_u‖₁ decreases in u.
        let peak = self.family.l1_norm(lo)?;
        Ok(peak * peak * self.bessel_constant()? * self.family.interval_length())
    }

    /// Regularized least squares by CGLS:
    /// `min ‖diag(√w_u)(M F - samples)‖² + reg·‖f‖₂²`.
    ///
    /// The iteration runs in Plancherel-orthonormal coordinates
    /// `c_j = √(w_j/2π)·F_j`. When `truth` is given it is resampled to the
    /// operator grid if needed and the relative error is reported.
    pub fn reconstruct(
        &self,
        samples: &[Complex64],
        params: &ReconstructParams,
        truth: Option<&BandlimitedFn>,
    ) -> Result<ReconstructionResult> {
        if samples.len() != self.rows.len() {
            return Err(Error::Dimension {
                expected: self.rows.len(),
                got: samples.len(),
            });
        }
        let reg = match params.regularization {
            Some(r) if r >= 0.0 => r,
            Some(_) => return Err(invalid("regularization must be nonnegative")),
            None => DEFAULT_REG_FACTOR * self.frame_bounds()?.b_hat,
        };
        let a = self.normalized();
        let y = nalgebra::DVector::from_iterator(
            samples.len(),
            samples.iter().zip(&self.row_weights).map(|(s, w)| s * *w),
        );
        let (x, history, iterations, converged) = cgls(&a, &y, reg, params.tol, params.max_iter);

        let w = self.grid.weights();
        let values = x
            .iter()
            .zip(&w)
            .map(|(c, wj)| c / libm::sqrt(wj / (2.0 * PI)))
            .collect();
        let recovered = BandlimitedFn::from_values(self.grid, values)?;
        let relative_l2_error = truth.map(|t| {
            let t = if *t.grid() == self.grid {
                t.clone()
            } else {
                t.resampled(self.grid)
            };
            let diff = recovered
                .combine(Complex64::new(1.0, 0.0), &t, Complex64::new(-1.0, 0.0))
                .expect("same grid");
            let norm = t.l2_norm();
            if norm > 0.0 {
                diff.l2_norm() / norm
            } else {
                diff.l2_norm()
            }
        });
        Ok(ReconstructionResult {
            recovered,
            relative_l2_error,
            residual_norm: *history
                .last()
                .expect("history starts with the initial guess"),
            residual_history: history,
            iterations,
            regularization: reg,
            converged,
        })
    }
}

/// CGLS for `min ‖A x - y‖² + reg‖x‖²`; returns the augmented residual
/// after every step.
fn cgls(
    a: &DMatrix<Complex64>,
    y: &nalgebra::DVector<Complex64>,
    reg: f64,
    tol: f64,
    max_iter: usize,
) -> (nalgebra::DVector<Complex64>, Vec<f64>, usize, bool) {
    let n = a.ncols();
    let mut x = nalgebra::DVector::<Complex64>::zeros(n);
    let mut r = y.clone();
    let mut s = a.ad_mul(&r);
    let stop = tol * s.norm();
    let mut p = s.clone();
    let mut gamma = s.norm_squared();
    let mut history = alloc::vec![r.norm()];
    if gamma == 0.0 {
        return (x, history, 0, true);
    }
    for it in 1..=max_iter {
        let q = a * &p;
        let delta = q.norm_squared() + reg * p.norm_squared();
        if delta == 0.0 {
            return (x, history, it - 1, true);
        }
        let alpha = Complex64::new(gamma / delta, 0.0);
        x.axpy(alpha, &p, Complex64::new(1.0, 0.0));
        r.axpy(-alpha, &q, Complex64::new(1.0, 0.0));
        s = a.ad_mul(&r);
        s.axpy(Complex64::new(-reg, 0.0), &x, Complex64::new(1.0, 0.0));
        let aug = libm::sqrt(r.norm_squared() + reg * x.norm_squared());
        // Rounding can lift the last digit; the exact sequence is monotone.
        let prev = *history.last().expect("nonempty");
        history.push(aug.min(prev));
        let gamma_new = s.norm_squared();
        if libm::sqrt(gamma_new) <= stop {
            return (x, history, it, true);
        }
        let beta = Complex64::new(gamma_new / gamma, 0.0);
        p = &s + &p * beta;
        gamma = gamma_new;
    }
    (x, history, max_iter, false)
}

/// Bessel constant of `Λ` on `grid`: the largest squared singular value of
/// `E_{λj} = √(w_j/2π)·e^{iλt_j}`, i.e. the smallest `C` with
/// `Σ_λ |f(λ)|² ≤ C‖f‖₂²` for every `f` on the grid.
pub fn bessel_constant(set: &SamplingSet, grid: &SpectrumGrid) -> Result<f64> {
    let nodes = grid.nodes();
    let scale: Vec<f64> = grid
        .weights()
        .iter()
        .map(|w| libm::sqrt(w / (2.0 * PI)))
        .collect();
    let pts = set.points();
    let e = DMatrix::from_fn(pts.len(), nodes.len(), |r, c| {
        cis(pts[r] * nodes[c]) * scale[c]
    });
    let sv = singular_values(e)?;
    Ok(sv.first().map_or(0.0, |s| s * s))
}

/// `max_{λ, u_i} |(f ∗ φ_{u_i})(λ)|` over the family's `u` grid.
pub fn annihilation_test<S: Signal + ?Sized>(
    family: &KernelFamily,
    signal: &S,
    set: &SamplingSet,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &u in family.u_nodes() {
        for v in signal.convolved(family, u, set.points())? {
            worst = worst.max(v.norm());
        }
    }
    Ok(worst)
}

/// Default dimension of the parity subspaces in the injectivity tests.
pub const INJECTIVITY_MODES: usize = 4;

/// Smallest singular value of the single-point operator `Λ = {0}` restricted
/// to real even spectra, with [`INJECTIVITY_MODES`] modes on an `n`-node grid.
pub fn even_injectivity_test(family: &KernelFamily, sigma: f64, n: usize) -> Result<f64> {
    parity_injectivity(family, sigma, n, INJECTIVITY_MODES, 0)
}

/// Odd counterpart of [`even_injectivity_test`]; vanishes for even kernels.
pub fn odd_injectivity_test(family: &KernelFamily, sigma: f64, n: usize) -> Result<f64> {
    parity_injectivity(family, sigma, n, INJECTIVITY_MODES, 1)
}

/// Parity injectivity test with `modes` Legendre modes `P_{2m+parity}(t/σ)`,
/// orthonormalised in the Plancherel inner product of the grid.
pub fn parity_injectivity(
    family: &KernelFamily,
    sigma: f64,
    n: usize,
    modes: usize,
    parity: usize,
) -> Result<f64> {
    if n < 32 {
        return Err(invalid("injectivity test needs N >= 32"));
    }
    if modes == 0 || parity > 1 {
        return Err(invalid("need at least one mode and parity 0 or 1"));
    }
    let grid = SpectrumGrid::new(sigma, n)?;
    let t = grid.nodes();
    let w = grid.weights();
    let dot = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .zip(&w)
            .map(|((x, y), wj)| x * y * wj)
            .sum::<f64>()
            / (2.0 * PI)
    };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(modes);
    for m in 0..modes {
        let mut v: Vec<f64> = t
            .iter()
            .map(|&tj| legendre(2 * m + parity, tj / sigma))
            .collect();
        // Two passes of modified Gram–Schmidt.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let norm = libm::sqrt(dot(&v, &v));
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        basis.push(v);
    }
    let u_nodes = family.u_nodes();
    let mut phi = Vec::with_capacity(u_nodes.len());
    for &u in u_nodes {
        let mut r = Vec::with_capacity(n);
        for &tj in &t {
            r.push(family.transform(u, tj)?);
        }
        phi.push(r);
    }
    let m = DMatrix::<f64>::from_fn(u_nodes.len(), modes, |i, k| {
        let s: f64 = (0..n).map(|j| w[j] * phi[i][j] * basis[k][j]).sum();
        libm::sqrt(family.u_weights()[i]) * s / (2.0 * PI)
    });
    let sv = singular_values(m)?;
    Ok(if u_nodes.len() < modes {
        0.0
    } else {
        *sv.last().unwrap_or(&0.0)
    })
}
