//! Bandlimited signals.
//!
//! A [`BandlimitedFn`] stores its spectrum `F = f̂` at the nodes of a uniform
//! grid on `[-σ, σ]`; the signal is the trapezoid-rule inverse transform
//! `f(x) = (1/2π) Σ_j w_j F_j e^{i x t_j}`. Such an `f` is a trigonometric
//! polynomial, periodic with period `2π/h` where `h` is the grid step.
//!
//! Bounded non-`L²` signals such as `sin(πx)` and a few special functions
//! also exist as [`ClosedForm`] evaluators. Both variants implement
//! [`Signal`], so null tests accept either.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::kernels::KernelFamily;
use crate::quadrature::{gregory_weights, trapezoid_weights};

/// Uniform frequency grid on `[-σ, σ]` with `len` nodes, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumGrid {
    sigma: f64,
    len: usize,
}

impl SpectrumGrid {
    /// Default node count for standalone signals.
    pub const DEFAULT_LEN: usize = 1024;
    /// Smallest admissible node count.
    pub const MIN_LEN: usize = 16;

    /// Grid with `len >= 16` nodes on `[-sigma, sigma]`.
    pub fn new(sigma: f64, len: usize) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(invalid("band edge sigma must be positive"));
        }
        if len < Self::MIN_LEN {
            return Err(invalid("spectrum grid needs at least 16 nodes"));
        }
        Ok(Self { sigma, len })
    }

    /// Odd-sized grid whose signals are periodic with period at least
    /// `period`: step `σ/n` with `n = ceil(σ·period/(2π))`.
    ///
    /// With `period` equal to the length of a sampling window, every signal
    /// on this grid is seen in full by the window.
    pub fn periodic(sigma: f64, period: f64) -> Result<Self> {
        if !(period > 0.0) {
            return Err(invalid("period must be positive"));
        }
        let n = libm::ceil(sigma * period / (2.0 * PI) - 1e-9).max(8.0) as usize;
        Self::new(sigma, 2 * n + 1)
    }

    /// Band edge `σ`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Grid step `h = 2σ/(len-1)`.
    pub fn step(&self) -> f64 {
        2.0 * self.sigma / (self.len - 1) as f64
    }

    /// Period `2π/h` of the signals on this grid.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.step()
    }

    /// Node `t_j`; `t_{len-1-j} = -t_j` exactly.
    pub fn node(&self, j: usize) -> f64 {
        let m = (self.len - 1) as f64;
        self.sigma * (2.0 * j as f64 - m) / m
    }

    /// All nodes.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len).map(|j| self.node(j)).collect()
    }

    /// Trapezoid weights, summing to `2σ`.
    pub fn weights(&self) -> Vec<f64> {
        trapezoid_weights(self.len, self.step())
    }
}

/// A bandlimited function represented by its spectrum on a [`SpectrumGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct BandlimitedFn {
    grid: SpectrumGrid,
    values: Vec<Complex64>,
}

impl BandlimitedFn {
    /// Wraps spectrum values; their count must match the grid.
    pub fn from_values(grid: SpectrumGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples a spectrum function at the grid nodes.
    pub fn from_fn<F: FnMut(f64) -> Complex64>(grid: SpectrumGrid, mut spectrum: F) -> Self {
        let values = (0..grid.len()).map(|j| spectrum(grid.node(j))).collect();
        Self { grid, values }
    }

    /// The zero function.
    pub fn zero(grid: SpectrumGrid) -> Self {
        Self {
            grid,
            values: alloc::vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// `sin(σ(x - x0)) / (σ(x - x0))` on `grid`, spectrum `(π/σ)e^{-i x0 t}`.
    pub fn sinc(grid: SpectrumGrid, x0: f64) -> Self {
        let amp = PI / grid.sigma();
        Self::from_fn(grid, |t| Complex64::from_polar(amp, -x0 * t))
    }

    /// `sin(σx)` as point masses at the two band-edge nodes.
    ///
    /// Not square integrable; its `l2_norm` is a grid artefact.
    pub fn sine(grid: SpectrumGrid) -> Self {
        let mut f = Self::zero(grid);
        let w = grid.weights();
        let n = grid.len();
        // (1/2π)(w_0 F_0 e^{-iσx} + w_n F_n e^{iσx}) = sin(σx)
        f.values[0] = Complex64::new(0.0, PI / w[0]);
        f.values[n - 1] = Complex64::new(0.0, -PI / w[n - 1]);
        f
    }

    /// Spectrum grid.
    pub fn grid(&self) -> &SpectrumGrid {
        &self.grid
    }

    /// Band edge `σ`.
    pub fn sigma(&self) -> f64 {
        self.grid.sigma()
    }

    /// Spectrum values `F_j`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `f(x)`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let w = self.grid.weights();
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (f, wj)) in self.values.iter().zip(&w).enumerate() {
            acc += f * cis(x * self.grid.node(j)) * *wj;
        }
        acc / (2.0 * PI)
    }

    /// `‖f‖₂²` by Plancherel: `(1/2π) Σ w_j |F_j|²`.
    pub fn l2_norm_sq(&self) -> f64 {
        let w = self.grid.weights();
        self.values
            .iter()
            .zip(&w)
            .map(|(f, wj)| wj * f.norm_sqr())
            .sum::<f64>()
            / (2.0 * PI)
    }

    /// `‖f‖₂`.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.l2_norm_sq())
    }

    /// `‖f'‖₂² = (1/2π) ∫ t²|F(t)|² dt` with end-corrected trapezoid weights.
    pub fn derivative_l2_norm_sq(&self) -> f64 {
        let w = gregory_weights(self.grid.len(), self.grid.step());
        self.values
            .iter()
            .zip(&w)
            .enumerate()
            .map(|(j, (f, wj))| {
                let t = self.grid.node(j);
                wj * t * t * f.norm_sqr()
            })
            .sum::<f64>()
            / (2.0 * PI)
    }

    /// `f'`, spectrum `i t F(t)`.
    pub fn derivative(&self) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(j, f)| f * Complex64::new(0.0, self.grid.node(j)))
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Largest `|f|` on a uniform grid over `window` with `points_per_unit`
    /// points per unit length (at least 8). A lower estimate of `‖f‖_∞`.
    pub fn sup_norm(&self, window: (f64, f64), points_per_unit: f64) -> Result<f64> {
        Ok(self.sup_search(window, points_per_unit)?.1)
    }

    /// [`Self::sup_norm`] followed by golden-section polishing of the best
    /// grid cells.
    pub fn sup_norm_refined(&self, window: (f64, f64), points_per_unit: f64) -> Result<f64> {
        let (xs, best) = self.sup_search(window, points_per_unit)?;
        let _ = best;
        let vals: Vec<f64> = xs.iter().map(|&x| self.eval(x).norm()).collect();
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| {
            vals[b]
                .partial_cmp(&vals[a])
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let step = if xs.len() > 1 { xs[1] - xs[0] } else { 0.0 };
        let mut sup = vals.iter().copied().fold(0.0, f64::max);
        for &i in order.iter().take(4) {
            let lo = (xs[i] - step).max(window.0);
            let hi = (xs[i] + step).min(window.1);
            sup = sup.max(golden_max(|x| self.eval(x).norm(), lo, hi));
        }
        Ok(sup)
    }

    fn sup_search(&self, window: (f64, f64), points_per_unit: f64) -> Result<(Vec<f64>, f64)> {
        if points_per_unit < 8.0 {
            return Err(invalid("sup_norm needs at least 8 points per unit length"));
        }
        if !(window.1 >= window.0) {
            return Err(invalid("window must satisfy lo <= hi"));
        }
        let n = libm::ceil((window.1 - window.0) * points_per_unit) as usize + 1;
        let xs: Vec<f64> = (0..n)
            .map(|k| {
                if n == 1 {
                    window.0
                } else {
                    window.0 + (window.1 - window.0) * k as f64 / (n - 1) as f64
                }
            })
            .collect();
        let best = xs.iter().map(|&x| self.eval(x).norm()).fold(0.0, f64::max);
        Ok((xs, best))
    }

    /// `f ∗ φ_u`: spectrum `F·Φ_u` on the same grid.
    pub fn convolve(&self, fam: &KernelFamily, u: f64) -> Result<Self> {
        let mut values = Vec::with_capacity(self.values.len());
        for (j, f) in self.values.iter().enumerate() {
            values.push(f * fam.transform(u, self.grid.node(j))?);
        }
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// Real/imaginary and even/odd parts.
    pub fn parity_split(&self) -> ParityParts {
        let n = self.values.len();
        let rev = |j: usize| self.values[n - 1 - j];
        let half = Complex64::new(0.5, 0.0);
        let make = |f: &dyn Fn(usize) -> Complex64| Self {
            grid: self.grid,
            values: (0..n).map(f).collect(),
        };
        let even = make(&|j| (self.values[j] + rev(j)) * half);
        let odd = make(&|j| (self.values[j] - rev(j)) * half);
        // f_r = (f + conj f)/2 has spectrum (F(t) + conj F(-t))/2.
        let real_part = make(&|j| (self.values[j] + rev(j).conj()) * half);
        let imag_part = make(&|j| (self.values[j] - rev(j).conj()) / Complex64::new(0.0, 2.0));
        ParityParts {
            even,
            odd,
            real_part,
            imag_part,
        }
    }

    /// `a·self + b·other` on a shared grid.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(invalid("signals live on different spectrum grids"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// Largest `|t_j|` with `|F_j| > threshold`, or 0 for a null spectrum.
    pub fn support_edge(&self, threshold: f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, f)| f.norm() > threshold)
            .map(|(j, _)| libm::fabs(self.grid.node(j)))
            .fold(0.0, f64::max)
    }

    /// Linear interpolation of the spectrum onto another grid; zero outside
    /// the current band.
    pub fn resampled(&self, grid: SpectrumGrid) -> Self {
        let h = self.grid.step();
        let sigma = self.grid.sigma();
        let n = self.values.len();
        Self::from_fn(grid, |t| {
            if libm::fabs(t) > sigma * (1.0 + 1e-12) {
                return Complex64::new(0.0, 0.0);
            }
            let pos = ((t + sigma) / h).clamp(0.0, (n - 1) as f64);
            let j = (libm::floor(pos) as usize).min(n - 2);
            let frac = pos - j as f64;
            self.values[j] * (1.0 - frac) + self.values[j + 1] * frac
        })
    }
}

/// Parity decomposition of a [`BandlimitedFn`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParityParts {
    /// `(f(x) + f(-x))/2`.
    pub even: BandlimitedFn,
    /// `(f(x) - f(-x))/2`.
    pub odd: BandlimitedFn,
    /// `(f + conj f)/2`, real on the real line.
    pub real_part: BandlimitedFn,
    /// `(f - conj f)/(2i)`, real on the real line.
    pub imag_part: BandlimitedFn,
}

/// `sin(σ(x - x0)) / (σ(x - x0))` with [`SpectrumGrid::DEFAULT_LEN`] nodes.
pub fn sinc_pw(sigma: f64, x0: f64) -> Result<BandlimitedFn> {
    Ok(BandlimitedFn::sinc(
        SpectrumGrid::new(sigma, SpectrumGrid::DEFAULT_LEN)?,
        x0,
    ))
}

/// Mollifier `h_ε(x) = sin(εx)/(εx)`, band edge `ε`.
pub fn mollifier_h(epsilon: f64) -> Result<BandlimitedFn> {
    sinc_pw(epsilon, 0.0)
}

/// Near-null witness `sin(πx)·sin(εx)/(εx)` with the default node count.
pub fn near_null_witness(epsilon: f64) -> Result<BandlimitedFn> {
    near_null_witness_with_len(epsilon, SpectrumGrid::DEFAULT_LEN)
}

/// Near-null witness on a grid of `len` nodes over `[-(π+ε), π+ε]`.
///
/// The spectrum is `∓i·π/(2ε)` on `±[π-ε, π+ε]`. Grid values are exact
/// cell averages, so the two interior jumps are captured to second order.
pub fn near_null_witness_with_len(epsilon: f64, len: usize) -> Result<BandlimitedFn> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("witness needs 0 < epsilon < 1"));
    }
    let sigma = PI + epsilon;
    let grid = SpectrumGrid::new(sigma, len)?;
    let h = grid.step();
    let w = grid.weights();
    let level = PI / (2.0 * epsilon);
    let overlap = |a: f64, b: f64, c: f64, d: f64| (b.min(d) - a.max(c)).max(0.0);
    let values = (0..len)
        .map(|j| {
            let t = grid.node(j);
            let (a, b) = ((t - 0.5 * h).max(-sigma), (t + 0.5 * h).min(sigma));
            let plus = overlap(a, b, PI - epsilon, sigma);
            let minus = overlap(a, b, -sigma, -PI + epsilon);
            Complex64::new(0.0, level * (minus - plus) / w[j])
        })
        .collect();
    BandlimitedFn::from_values(grid, values)
}

/// Closed-form bandlimited signals, including bounded non-`L²` ones.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ClosedForm {
    /// `sin(ωx)`.
    Sine {
        /// Angular frequency.
        omega: f64,
    },
    /// `sin(σ(x - x0)) / (σ(x - x0))`.
    Sinc {
        /// Band edge.
        sigma: f64,
        /// Centre.
        x0: f64,
    },
    /// `sin(πx)·sin(εx)/(εx)`.
    Witness {
        /// Envelope band `ε`.
        epsilon: f64,
    },
}

impl ClosedForm {
    /// Near-null witness with `0 < ε < 1`.
    pub fn witness(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid("witness needs 0 < epsilon < 1"));
        }
        Ok(Self::Witness { epsilon })
    }
}

/// Something that can be evaluated and pushed through the kernel family.
pub trait Signal {
    /// Band edge of the spectrum.
    fn band_edge(&self) -> f64;

    /// `f(x)`.
    fn eval(&self, x: f64) -> Complex64;

    /// `(f ∗ φ_u)(x)` for every `x` in `xs`.
    fn convolved(&self, fam: &KernelFamily, u: f64, xs: &[f64]) -> Result<Vec<Complex64>>;
}

impl Signal for BandlimitedFn {
    fn band_edge(&self) -> f64 {
        self.sigma()
    }

    fn eval(&self, x: f64) -> Complex64 {
        BandlimitedFn::eval(self, x)
    }

    fn convolved(&self, fam: &KernelFamily, u: f64, xs: &[f64]) -> Result<Vec<Complex64>> {
        let w = self.grid.weights();
        let mut g = Vec::with_capacity(self.values.len());
        for (j, f) in self.values.iter().enumerate() {
            g.push(f * (w[j] * fam.transform(u, self.grid.node(j))? / (2.0 * PI)));
        }
        let nodes = self.grid.nodes();
        Ok(xs
            .iter()
            .map(|&x| g.iter().zip(&nodes).map(|(gj, &t)| gj * cis(x * t)).sum())
            .collect())
    }
}

impl Signal for ClosedForm {
    fn band_edge(&self) -> f64 {
        match *self {
            ClosedForm::Sine { omega } => libm::fabs(omega),
            ClosedForm::Sinc { sigma, .. } => sigma,
            ClosedForm::Witness { epsilon } => PI + epsilon,
        }
    }

    fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(self.eval_real(x), 0.0)
    }

    fn convolved(&self, fam: &KernelFamily, u: f64, xs: &[f64]) -> Result<Vec<Complex64>> {
        if let ClosedForm::Sine { omega } = *self {
            // An even kernel maps sin(ω·) to Φ_u(ω)·sin(ω·).
            let phi = fam.transform(u, omega)?;
            return Ok(xs
                .iter()
                .map(|&x| Complex64::new(phi * libm::sin(omega * x), 0.0))
                .collect());
        }
        let rule = fam.time_rule(u, self.band_edge())?;
        Ok(xs
            .iter()
            .map(|&x| rule.convolve_at(x, |y| Complex64::new(self.eval_real(y), 0.0)))
            .collect())
    }
}

impl ClosedForm {
    fn eval_real(&self, x: f64) -> f64 {
        match *self {
            ClosedForm::Sine { omega } => libm::sin(omega * x),
            ClosedForm::Sinc { sigma, x0 } => sinc(sigma * (x - x0)),
            ClosedForm::Witness { epsilon } => libm::sin(PI * x) * sinc(epsilon * x),
        }
    }
}

/// `sin(y)/y` with the removable singularity filled in.
pub fn sinc(y: f64) -> f64 {
    if libm::fabs(y) < 1e-4 {
        1.0 - y * y / 6.0
    } else {
        libm::sin(y) / y
    }
}

#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    let (s, c) = libm::sincos(theta);
    Complex64::new(c, s)
}

/// Golden-section maximisation of a unimodal `f` on `[lo, hi]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let r = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..80 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    fa.max(fb).max(f(lo)).max(f(hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_is_symmetric_with_trapezoid_weights() {
        let g = SpectrumGrid::new(PI, 1024).unwrap();
        for j in 0..g.len() {
            assert_eq!(g.node(j), -g.node(g.len() - 1 - j));
        }
        let s: f64 = g.weights().iter().sum();
        assert_relative_eq!(s, 2.0 * PI, epsilon = 1e-12);
        assert!(SpectrumGrid::new(PI, 8).is_err());
        assert!(SpectrumGrid::new(0.0, 64).is_err());
    }

    #[test]
    fn periodic_grid_matches_window() {
        let g = SpectrumGrid::periodic(PI, 50.0).unwrap();
        assert_eq!(g.len(), 51);
        assert_relative_eq!(g.period(), 50.0, epsilon = 1e-12);
        let g = SpectrumGrid::periodic(2.0, 50.0).unwrap();
        assert!(g.period() >= 50.0 - 1e-9);
    }

    #[test]
    fn zero_spectrum_evaluates_to_zero() {
        let f = BandlimitedFn::zero(SpectrumGrid::new(PI, 64).unwrap());
        for x in [-3.0, 0.0, 0.7, 100.0] {
            assert_eq!(f.eval(x), c(0.0, 0.0));
        }
        assert_eq!(f.l2_norm(), 0.0);
        assert_eq!(f.sup_norm((-3.0, 3.0), 8.0).unwrap(), 0.0);
    }

    #[test]
    fn sinc_examples() {
        let f = sinc_pw(PI, 0.0).unwrap();
        assert_relative_eq!(f.eval(0.0).re, 1.0, epsilon = 1e-12);
        assert!(f.eval(1.0).norm() < 1e-10);
        // Plancherel: (1/2π)(π/σ)²·2σ = π/σ.
        assert_relative_eq!(f.l2_norm_sq(), 1.0, epsilon = 1e-8);

        let g = sinc_pw(PI, 5.0).unwrap();
        assert_relative_eq!(g.eval(5.0).re, 1.0, epsilon = 1e-12);
        assert!(g.eval(6.0).norm() < 1e-10);
    }

    #[test]
    fn mollifier_identities() {
        for eps in [0.1, 0.5, 1.0] {
            let h = mollifier_h(eps).unwrap();
            assert_relative_eq!(h.eval(0.0).re, 1.0, epsilon = 1e-12);
            assert_relative_eq!(h.l2_norm_sq(), PI / eps, max_relative = 1e-8);
            assert_relative_eq!(
                h.derivative_l2_norm_sq(),
                PI * eps / 3.0,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn sup_norm_examples() {
        let f = sinc_pw(PI, 0.0).unwrap();
        assert_relative_eq!(
            f.sup_norm_refined((-10.0, 10.0), 8.0).unwrap(),
            1.0,
            epsilon = 1e-6
        );
        assert!(f.sup_norm((-10.0, 10.0), 4.0).is_err());
    }

    #[test]
    fn witness_shape() {
        let eps = 0.1;
        let f = near_null_witness(eps).unwrap();
        assert!(f.eval(0.0).norm() < 1e-12);
        assert_relative_eq!(f.eval(0.5).re, sinc(eps * 0.5), epsilon = 1e-4);
        assert!(f.eval(0.5).im.abs() < 1e-12);
        assert_eq!(f.support_edge(0.0), PI + eps);
        // Grid-maximisation oracle: |f| ≤ 1 with the maximum near x = ±1/2.
        let sup = f.sup_norm((-20.0, 20.0), 64.0).unwrap();
        assert!((sup - 1.0).abs() < 0.02, "{sup}");
        // Agrees with the closed-form evaluator away from the origin.
        let cf = ClosedForm::witness(eps).unwrap();
        for x in [0.3, 2.7, -11.2, 25.0] {
            assert!((f.eval(x).re - cf.eval(x).re).abs() < 1e-3);
        }
        assert!(near_null_witness(1.0).is_err());
        assert!(ClosedForm::witness(0.0).is_err());
    }

    #[test]
    fn sine_grid_variant() {
        let g = SpectrumGrid::new(PI, 256).unwrap();
        let s = BandlimitedFn::sine(g);
        for x in [0.25, 1.0, 3.7, -8.1] {
            assert!((s.eval(x) - c((PI * x).sin(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn convolution_of_odd_signal_vanishes_at_zero() {
        let fam = KernelFamily::new(2.0, 0.5, 2.0).unwrap();
        let s = BandlimitedFn::sine(SpectrumGrid::new(PI, 64).unwrap());
        let g = s.convolve(&fam, 1.0).unwrap();
        assert!(g.eval(0.0).norm() < 1e-10);
        assert!(
            ClosedForm::Sine { omega: PI }
                .convolved(&fam, 1.0, &[0.0])
                .unwrap()[0]
                .norm()
                < 1e-15
        );
        let z = BandlimitedFn::zero(SpectrumGrid::new(PI, 64).unwrap())
            .convolve(&fam, 1.0)
            .unwrap();
        assert!(z.values().iter().all(|v| *v == c(0.0, 0.0)));
    }

    #[test]
    fn convolved_sinc_matches_time_domain_quadrature() {
        let fam = KernelFamily::new(2.0, 0.5, 2.0).unwrap();
        let f = sinc_pw(PI, 0.0).unwrap();
        let spectral = f.convolve(&fam, 1.0).unwrap().eval(0.0);
        // Oracle: ∫ φ_1(s) sinc(πs) ds with a fine composite Gauss rule.
        let rule = crate::quadrature::GaussLegendre::new(20);
        let oracle: f64 = (0..400)
            .map(|p| {
                let a = -10.0 + 0.05 * p as f64;
                rule.integrate(a, a + 0.05, |s| (-s * s).exp() * sinc(PI * s))
            })
            .sum();
        assert!(
            (spectral.re - oracle).abs() < 1e-6,
            "{} vs {oracle}",
            spectral.re
        );
        assert!(spectral.im.abs() < 1e-12);
    }

    #[test]
    fn parity_examples() {
        let g = SpectrumGrid::new(PI, 128).unwrap();
        let s = BandlimitedFn::sine(g).parity_split();
        assert!(s.even.values().iter().all(|v| v.norm() < 1e-12));
        let p = BandlimitedFn::sinc(g, 0.0).parity_split();
        assert!(p.odd.values().iter().all(|v| v.norm() < 1e-12));

        let f = sinc_pw(PI, 1.0).unwrap();
        let parts = f.parity_split();
        let sum = parts.even.l2_norm_sq() + parts.odd.l2_norm_sq();
        assert_relative_eq!(sum, f.l2_norm_sq(), max_relative = 1e-10);
        let back = parts
            .even
            .combine(c(1.0, 0.0), &parts.odd, c(1.0, 0.0))
            .unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        let back = parts
            .real_part
            .combine(c(1.0, 0.0), &parts.imag_part, c(0.0, 1.0))
            .unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        for x in [0.3, -2.2] {
            assert!((parts.even.eval(x) - parts.even.eval(-x)).norm() < 1e-12);
            assert!((parts.odd.eval(x) + parts.odd.eval(-x)).norm() < 1e-12);
            assert!(parts.real_part.eval(x).im.abs() < 1e-12);
            assert!(parts.imag_part.eval(x).im.abs() < 1e-12);
        }
    }

    #[test]
    fn combine_rejects_mismatched_grids() {
        let a = BandlimitedFn::zero(SpectrumGrid::new(PI, 64).unwrap());
        let b = BandlimitedFn::zero(SpectrumGrid::new(PI, 65).unwrap());
        assert!(a.combine(c(1.0, 0.0), &b, c(1.0, 0.0)).is_err());
        assert!(BandlimitedFn::from_values(*a.grid(), vec![c(0.0, 0.0); 3]).is_err());
    }
}
