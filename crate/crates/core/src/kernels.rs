//! The fractional-diffusion kernel family `φ_u(x) = exp(-u|x|^α)`, `u ∈ I`.
//!
//! The Fourier transform `Φ_u(t) = ∫ e^{-itx} φ_u(x) dx` is real and even.
//! It has closed forms for `α = 1` (`2u/(u²+t²)`) and `α = 2`
//! (`√(π/u)·exp(-t²/(4u))`). Other exponents use adaptive Gauss–Legendre
//! quadrature of `2∫_0^X e^{-u x^α} cos(tx) dx`, with `X` chosen so that
//! `exp(-I_lo·X^α) < 1e-16`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{
    adaptive, gauss_legendre_interval, trapezoid_weights, AdaptiveConfig, Estimate, GaussLegendre,
};

/// `ln(1e16)`: tail cut-off exponent for the kernel support.
const TAIL_EXPONENT: f64 = 36.841_361_487_904_734;

/// Points per Gauss–Legendre panel.
const PANEL_RULE: usize = 16;

/// The kernel family `{φ_u : u ∈ [lo, hi]}` with a quadrature grid on the
/// parameter interval.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFamily {
    alpha: f64,
    lo: f64,
    hi: f64,
    u_nodes: Vec<f64>,
    u_weights: Vec<f64>,
    quad: AdaptiveConfig,
    rule: GaussLegendre,
}

impl KernelFamily {
    /// Default number of Gauss–Legendre nodes on `I`.
    pub const DEFAULT_NODES: usize = 32;

    /// Family with [`Self::DEFAULT_NODES`] Gauss–Legendre nodes on `[lo, hi]`.
    pub fn new(alpha: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::with_node_count(alpha, lo, hi, Self::DEFAULT_NODES)
    }

    /// Family with `n` Gauss–Legendre nodes on `[lo, hi]`.
    pub fn with_node_count(alpha: f64, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("u grid needs at least one node"));
        }
        check_interval(alpha, lo, hi)?;
        let (nodes, weights) = gauss_legendre_interval(n, lo, hi);
        Self::with_nodes(alpha, lo, hi, nodes, weights)
    }

    /// Family with an explicit parameter grid.
    ///
    /// Nodes must be strictly increasing inside `[lo, hi]` and the positive
    /// weights must sum to `hi - lo` within `1e-12` relative.
    pub fn with_nodes(
        alpha: f64,
        lo: f64,
        hi: f64,
        u_nodes: Vec<f64>,
        u_weights: Vec<f64>,
    ) -> Result<Self> {
        check_interval(alpha, lo, hi)?;
        if u_nodes.is_empty() || u_nodes.len() != u_weights.len() {
            return Err(Error::Dimension {
                expected: u_nodes.len(),
                got: u_weights.len(),
            });
        }
        if u_nodes.windows(2).any(|p| p[0] >= p[1]) {
            return Err(invalid("u grid nodes must be strictly increasing"));
        }
        if u_nodes.iter().any(|&u| !(lo..=hi).contains(&u)) {
            return Err(invalid(
                "u grid nodes must lie inside the parameter interval",
            ));
        }
        if u_weights.iter().any(|&w| !(w > 0.0)) {
            return Err(invalid("u grid weights must be positive"));
        }
        let total: f64 = u_weights.iter().sum();
        if libm::fabs(total - (hi - lo)) > 1e-12 * (hi - lo) {
            return Err(invalid("u grid weights must sum to the interval length"));
        }
        Ok(Self {
            alpha,
            lo,
            hi,
            u_nodes,
            u_weights,
            quad: AdaptiveConfig::default(),
            rule: GaussLegendre::new(PANEL_RULE),
        })
    }

    /// Replaces the quadrature settings used by the general-α transform.
    pub fn with_quadrature(mut self, quad: AdaptiveConfig) -> Self {
        self.quad = quad;
        self
    }

    /// Exponent `α`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Parameter interval `(lo, hi)`.
    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Interval length `|I|`.
    pub fn interval_length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Parameter nodes.
    pub fn u_nodes(&self) -> &[f64] {
        &self.u_nodes
    }

    /// Parameter quadrature weights.
    pub fn u_weights(&self) -> &[f64] {
        &self.u_weights
    }

    /// Quadrature settings.
    pub fn quadrature(&self) -> &AdaptiveConfig {
        &self.quad
    }

    fn check_u(&self, u: f64) -> Result<()> {
        if !(self.lo..=self.hi).contains(&u) {
            return Err(Error::ParameterDomain {
                u,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(())
    }

    /// `φ_u(x) = exp(-u|x|^α)`.
    pub fn eval(&self, u: f64, x: f64) -> Result<f64> {
        self.check_u(u)?;
        Ok(self.eval_unchecked(u, x))
    }

    #[inline]
    fn eval_unchecked(&self, u: f64, x: f64) -> f64 {
        libm::exp(-u * abs_pow(x, self.alpha))
    }

    /// True when `Φ_u` has a closed form (`α ∈ {1, 2}`).
    pub fn has_closed_form(&self) -> bool {
        self.alpha == 1.0 || self.alpha == 2.0
    }

    /// Radius beyond which every `φ_u`, `u ∈ I`, is below `1e-16`.
    pub fn truncation_radius(&self) -> f64 {
        libm::pow(TAIL_EXPONENT / self.lo, 1.0 / self.alpha)
    }

    /// `‖φ_u‖₁ = 2Γ(1 + 1/α)·u^{-1/α}`.
    pub fn l1_norm(&self, u: f64) -> Result<f64> {
        self.check_u(u)?;
        Ok(2.0 * libm::tgamma(1.0 + 1.0 / self.alpha) * libm::pow(u, -1.0 / self.alpha))
    }

    /// Fourier transform `Φ_u(t)`.
    pub fn transform(&self, u: f64, t: f64) -> Result<f64> {
        self.check_u(u)?;
        if let Some(v) = self.closed_form(u, t) {
            return Ok(v);
        }
        Ok(self.transform_quadrature(u, t)?.value)
    }

    fn closed_form(&self, u: f64, t: f64) -> Option<f64> {
        if self.alpha == 2.0 {
            Some(libm::sqrt(core::f64::consts::PI / u) * libm::exp(-t * t / (4.0 * u)))
        } else if self.alpha == 1.0 {
            Some(2.0 * u / (u * u + t * t))
        } else {
            None
        }
    }

    /// `Φ_u(t)` by adaptive quadrature regardless of `α`, with its error
    /// estimate.
    pub fn transform_quadrature(&self, u: f64, t: f64) -> Result<Estimate> {
        self.check_u(u)?;
        let x_max = self.truncation_radius();
        let width = if t == 0.0 {
            1.0
        } else {
            (2.0 / libm::fabs(t)).min(1.0)
        };
        let panels = libm::ceil(x_max / width).clamp(1.0, 1e6) as usize;
        let alpha = self.alpha;
        let est = adaptive(&self.rule, 0.0, x_max, panels, &self.quad, |x| {
            libm::exp(-u * abs_pow(x, alpha)) * libm::cos(t * x)
        })?;
        Ok(Estimate {
            value: 2.0 * est.value,
            error: 2.0 * est.error,
        })
    }

    /// Second derivative `Φ_u''(t)`: closed form for `α ∈ {1, 2}`, otherwise
    /// five-point central differences with step `h`.
    pub fn transform_second_derivative(&self, u: f64, t: f64, h: f64) -> Result<f64> {
        self.check_u(u)?;
        if self.alpha == 2.0 {
            let phi = libm::sqrt(core::f64::consts::PI / u) * libm::exp(-t * t / (4.0 * u));
            return Ok(phi * (t * t / (4.0 * u * u) - 1.0 / (2.0 * u)));
        }
        if self.alpha == 1.0 {
            let d = u * u + t * t;
            return Ok(4.0 * u * (3.0 * t * t - u * u) / (d * d * d));
        }
        let f = |s: f64| self.transform(u, s);
        let v = (-f(t + 2.0 * h)? + 16.0 * f(t + h)? - 30.0 * f(t)? + 16.0 * f(t - h)?
            - f(t - 2.0 * h)?)
            / (12.0 * h * h);
        Ok(v)
    }

    /// Time-domain rule for `∫ φ_u(s) g(s) ds` where `g` is bandlimited with
    /// band edge at most `band_edge`.
    pub fn time_rule(&self, u: f64, band_edge: f64) -> Result<KernelRule> {
        self.check_u(u)?;
        let reach = libm::pow(TAIL_EXPONENT / u, 1.0 / self.alpha);
        let mut width = 0.5f64.min(2.0 * libm::pow(u, -1.0 / self.alpha));
        if band_edge > 0.0 {
            width = width.min(1.5 / band_edge);
        }
        let mut cuts: Vec<f64> = Vec::new();
        cuts.push(0.0);
        if self.alpha < 1.0 {
            // φ_u has an unbounded derivative at the origin.
            let mut a = width * libm::ldexp(1.0, -40);
            while a < width {
                cuts.push(a);
                a *= 2.0;
            }
        }
        let panels = libm::ceil(reach / width).max(1.0) as usize;
        for i in 1..=panels {
            cuts.push((width * i as f64).min(reach));
        }
        cuts.dedup();
        let mut nodes = Vec::with_capacity(2 * PANEL_RULE * cuts.len());
        let mut weights = Vec::with_capacity(nodes.capacity());
        for p in cuts.windows(2) {
            for (s, w) in self.rule.mapped(p[0], p[1]) {
                let k = w * self.eval_unchecked(u, s);
                nodes.push(s);
                weights.push(k);
                nodes.push(-s);
                weights.push(k);
            }
        }
        Ok(KernelRule { u, nodes, weights })
    }

    /// Numerically checks the regularity conditions on the kernel family.
    ///
    /// * decay: smallest `C` with `(1+x⁴)|φ_u(x)| ≤ C` on a log-spaced
    ///   `x`-grid over `[0, x_grid_max]` and the `u` grid;
    /// * Lipschitz: largest `‖φ_{u'} - φ_u‖₁ / |u' - u|` over adjacent nodes;
    /// * evenness/reality: `φ_u(-x) = φ_u(x)` exactly and a vanishing sine
    ///   transform;
    /// * non-vanishing: `min_t max_u |Φ_u(t)|` over `t_grid_size` points of
    ///   `[0, sigma]`;
    /// * completeness proxy: smallest Gram eigenvalue of
    ///   `{Φ_u'' + w·Φ_u}` in discretised `L²(0, sigma)`.
    pub fn verify_conditions(
        &self,
        sigma: f64,
        t_grid_size: usize,
        w: Complex64,
        tol: &Tolerances,
    ) -> Result<KernelConditionReport> {
        if !(sigma > 0.0) {
            return Err(invalid("sigma must be positive"));
        }
        if t_grid_size < 16 {
            return Err(invalid("t grid needs at least 16 points"));
        }
        let xs = decay_grid(tol.x_grid_points, tol.x_grid_max);

        let mut beta_c: f64 = 0.0;
        for &u in &self.u_nodes {
            for &x in &xs {
                let x4 = x * x * x * x;
                beta_c = beta_c.max((1.0 + x4) * self.eval_unchecked(u, x));
            }
        }

        let mut gamma_l: f64 = 0.0;
        for p in self.u_nodes.windows(2) {
            let d = self.l1_distance(p[0], p[1])?;
            gamma_l = gamma_l.max(d / (p[1] - p[0]));
        }

        let mut is_even_real = xs.iter().all(|&x| {
            self.u_nodes
                .iter()
                .all(|&u| self.eval_unchecked(u, -x) == self.eval_unchecked(u, x))
        });
        let t_grid: Vec<f64> = (0..t_grid_size)
            .map(|j| sigma * j as f64 / (t_grid_size - 1) as f64)
            .collect();
        for &u in &self.u_nodes {
            let scale = self.l1_norm(u)?;
            for &t in t_grid.iter().step_by((t_grid_size / 8).max(1)) {
                if libm::fabs(self.sine_transform(u, t)) > tol.evenness * scale {
                    is_even_real = false;
                }
            }
        }

        let (t_grid, phi, phi2) = self.transform_tables(sigma, t_grid_size, tol.fd_step)?;
        let n_u = self.u_nodes.len();
        let eta_min = (0..t_grid.len())
            .map(|j| {
                (0..n_u)
                    .map(|i| libm::fabs(phi[(j, i)]))
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        let theta = theta_probe(&phi, &phi2, sigma, w, tol)?;
        let (theta_sigma_min, theta_gram_max, theta_probe_rel) =
            (theta.sigma_min, theta.gram_max, theta.probe_rel);

        Ok(KernelConditionReport {
            beta_c,
            gamma_l,
            is_even_real,
            eta_min,
            theta_sigma_min,
            theta_gram_max,
            theta_probe_rel,
            theta_probe_nodes: theta.probe_nodes,
            theta_w_re: w.re,
            theta_w_im: w.im,
        })
    }

    /// Completeness proxy for several probes `w`, sharing one table of
    /// `Φ_u` and `Φ_u''` values.
    pub fn theta_sweep(
        &self,
        sigma: f64,
        t_grid_size: usize,
        ws: &[Complex64],
        tol: &Tolerances,
    ) -> Result<Vec<ThetaProbe>> {
        if !(sigma > 0.0) {
            return Err(invalid("sigma must be positive"));
        }
        if t_grid_size < 16 {
            return Err(invalid("t grid needs at least 16 points"));
        }
        let (_, phi, phi2) = self.transform_tables(sigma, t_grid_size, tol.fd_step)?;
        ws.iter()
            .map(|&w| theta_probe(&phi, &phi2, sigma, w, tol))
            .collect()
    }

    /// `t` grid on `[0, σ]` and the matrices `Φ_{u_i}(t_j)`, `Φ_{u_i}''(t_j)`
    /// with one column per `u` node.
    fn transform_tables(
        &self,
        sigma: f64,
        n: usize,
        fd_step: f64,
    ) -> Result<(Vec<f64>, DMatrix<f64>, DMatrix<f64>)> {
        let t_grid: Vec<f64> = (0..n).map(|j| sigma * j as f64 / (n - 1) as f64).collect();
        let n_u = self.u_nodes.len();
        let mut phi = DMatrix::<f64>::zeros(n, n_u);
        let mut phi2 = DMatrix::<f64>::zeros(n, n_u);
        for (i, &u) in self.u_nodes.iter().enumerate() {
            for (j, &t) in t_grid.iter().enumerate() {
                phi[(j, i)] = self.transform(u, t)?;
                phi2[(j, i)] = self.transform_second_derivative(u, t, fd_step)?;
            }
        }
        Ok((t_grid, phi, phi2))
    }

    /// `‖φ_a - φ_b‖₁` by adaptive quadrature.
    pub fn l1_distance(&self, a: f64, b: f64) -> Result<f64> {
        self.check_u(a)?;
        self.check_u(b)?;
        let x_max = self.truncation_radius();
        let alpha = self.alpha;
        let panels = libm::ceil(x_max).max(1.0) as usize;
        let est = adaptive(&self.rule, 0.0, x_max, panels, &self.quad, |x| {
            let p = abs_pow(x, alpha);
            libm::fabs(libm::exp(-a * p) - libm::exp(-b * p))
        })?;
        Ok(2.0 * est.value)
    }

    /// `∫ φ_u(x) sin(tx) dx` over a symmetric rule; zero for an even kernel.
    fn sine_transform(&self, u: f64, t: f64) -> f64 {
        let x_max = self.truncation_radius();
        let panels = libm::ceil(x_max).max(1.0) as usize;
        let width = x_max / panels as f64;
        let mut acc = 0.0;
        for p in 0..panels {
            let a = width * p as f64;
            for (x, w) in self.rule.mapped(a, a + width) {
                acc += w
                    * (self.eval_unchecked(u, x) * libm::sin(t * x)
                        + self.eval_unchecked(u, -x) * libm::sin(-t * x));
            }
        }
        acc
    }
}

fn check_interval(alpha: f64, lo: f64, hi: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(invalid("alpha must be positive"));
    }
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(invalid("parameter interval must satisfy 0 < lo < hi < inf"));
    }
    Ok(())
}

#[inline]
fn abs_pow(x: f64, alpha: f64) -> f64 {
    let ax = libm::fabs(x);
    if alpha == 2.0 {
        ax * ax
    } else if alpha == 1.0 {
        ax
    } else {
        libm::pow(ax, alpha)
    }
}

/// `0` followed by `n - 1` log-spaced points from `1e-3` to `x_max`.
fn decay_grid(n: usize, x_max: f64) -> Vec<f64> {
    let n = n.max(2);
    let lo = libm::log10(1e-3);
    let hi = libm::log10(x_max);
    let mut xs = Vec::with_capacity(n);
    xs.push(0.0);
    for k in 0..n - 1 {
        xs.push(libm::pow(
            10.0,
            lo + (hi - lo) * k as f64 / (n - 2).max(1) as f64,
        ));
    }
    xs
}

/// `count` indices spread evenly over `0..n`, endpoints included.
fn spread_indices(n: usize, count: usize) -> Vec<usize> {
    let count = count.clamp(1, n);
    if count == 1 {
        return alloc::vec![n / 2];
    }
    let mut v: Vec<usize> = (0..count)
        .map(|k| libm::round(k as f64 * (n - 1) as f64 / (count - 1) as f64) as usize)
        .collect();
    v.dedup();
    v
}

/// Gram diagnostics of `{Φ_u'' + wΦ_u}` in discretised `L²(0, σ)`.
fn theta_probe(
    phi: &DMatrix<f64>,
    phi2: &DMatrix<f64>,
    sigma: f64,
    w: Complex64,
    tol: &Tolerances,
) -> Result<ThetaProbe> {
    let (n, n_u) = phi.shape();
    let tw = trapezoid_weights(n, sigma / (n - 1) as f64);
    let probe = DMatrix::<Complex64>::from_fn(n, n_u, |j, i| {
        (Complex64::from(phi2[(j, i)]) + w * phi[(j, i)]) * libm::sqrt(tw[j])
    });
    let sv = singular_values(probe.clone())?;
    let picks = spread_indices(n_u, tol.theta_probe_count);
    let sub = DMatrix::<Complex64>::from_fn(n, picks.len(), |j, k| probe[(j, picks[k])]);
    let sub_sv = singular_values(sub)?;
    let probe_rel = match (sub_sv.first(), sub_sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 && picks.len() <= n => (lo * lo) / (hi * hi),
        _ => 0.0,
    };
    Ok(ThetaProbe {
        w_re: w.re,
        w_im: w.im,
        sigma_min: if n_u <= n {
            sv.last().map_or(0.0, |s| s * s)
        } else {
            0.0
        },
        gram_max: sv.first().map_or(0.0, |s| s * s),
        probe_rel,
        probe_nodes: picks.len(),
    })
}

/// Completeness proxy at one probe `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThetaProbe {
    /// Real part of `w`.
    pub w_re: f64,
    /// Imaginary part of `w`.
    pub w_im: f64,
    /// Smallest Gram eigenvalue over the whole `u` grid.
    pub sigma_min: f64,
    /// Largest Gram eigenvalue over the whole `u` grid.
    pub gram_max: f64,
    /// Smallest over largest Gram eigenvalue on the spread probe nodes.
    pub probe_rel: f64,
    /// Number of probe nodes.
    pub probe_nodes: usize,
}

impl ThetaProbe {
    /// Positive definite above `tol.theta_probe_floor`.
    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.sigma_min >= 0.0 && self.probe_rel > tol.theta_probe_floor
    }
}

/// Singular values in decreasing order.
pub(crate) fn singular_values<T>(m: DMatrix<T>) -> Result<Vec<f64>>
where
    T: nalgebra::ComplexField<RealField = f64>,
{
    let svd = m.try_svd(false, false, f64::EPSILON, 0).ok_or(Error::Svd)?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    Ok(sv)
}

/// Kernel-weighted time-domain quadrature rule for one parameter `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRule {
    u: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl KernelRule {
    /// Parameter the rule was built for.
    pub fn u(&self) -> f64 {
        self.u
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True if the rule has no nodes.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ φ_u(s) g(s) ds`.
    pub fn apply<F: FnMut(f64) -> Complex64>(&self, mut g: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Complex64::new(0.0, 0.0), |acc, (&s, &w)| acc + g(s) * w)
    }

    /// `(f ∗ φ_u)(x) = ∫ φ_u(s) f(x - s) ds`.
    pub fn convolve_at<F: FnMut(f64) -> Complex64>(&self, x: f64, mut f: F) -> Complex64 {
        self.apply(|s| f(x - s))
    }
}

/// Thresholds and grid sizes for [`KernelFamily::verify_conditions`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct Tolerances {
    /// Points in the decay-check grid.
    pub x_grid_points: usize,
    /// Right end of the decay-check grid.
    pub x_grid_max: f64,
    /// Allowed sine-transform magnitude relative to `‖φ_u‖₁`.
    pub evenness: f64,
    /// `eta_min` must exceed this.
    pub eta_floor: f64,
    /// Step for finite-difference second derivatives.
    pub fd_step: f64,
    /// Number of spread-out `u` nodes in the conditioned completeness probe.
    pub theta_probe_count: usize,
    /// Minimum relative Gram eigenvalue of the probe.
    pub theta_probe_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            x_grid_points: 512,
            x_grid_max: 1e3,
            evenness: 1e-12,
            eta_floor: 0.0,
            fd_step: 1e-3,
            theta_probe_count: 4,
            theta_probe_floor: 1e-10,
        }
    }
}

/// Outcome of [`KernelFamily::verify_conditions`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelConditionReport {
    /// Smallest `C` with `sup_u |φ_u(x)| ≤ C/(1+x⁴)` on the grid.
    pub beta_c: f64,
    /// Empirical Lipschitz constant of `u ↦ φ_u` in `L¹`.
    pub gamma_l: f64,
    /// Every sampled kernel is real and even.
    pub is_even_real: bool,
    /// `min_t max_u |Φ_u(t)|` over `[0, σ]`.
    pub eta_min: f64,
    /// Smallest Gram eigenvalue of `{Φ_u'' + wΦ_u : u ∈ u_grid}`; with many
    /// nearby nodes this sits at the roundoff floor and is reported only.
    pub theta_sigma_min: f64,
    /// Largest Gram eigenvalue of the same family.
    pub theta_gram_max: f64,
    /// Smallest over largest Gram eigenvalue on the spread-out probe nodes.
    pub theta_probe_rel: f64,
    /// Number of probe nodes behind `theta_probe_rel`.
    pub theta_probe_nodes: usize,
    /// Real part of the probe `w`.
    pub theta_w_re: f64,
    /// Imaginary part of the probe `w`.
    pub theta_w_im: f64,
}

/// Per-condition pass flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionVerdict {
    /// Decay bound is finite.
    pub beta: bool,
    /// Lipschitz constant is finite.
    pub gamma: bool,
    /// Real and even.
    pub zeta: bool,
    /// Transform never vanishes on the grid.
    pub eta: bool,
    /// Probe Gram matrix is positive definite above the floor.
    pub theta: bool,
}

impl ConditionVerdict {
    /// All five checks pass.
    pub fn all(&self) -> bool {
        self.beta && self.gamma && self.zeta && self.eta && self.theta
    }
}

impl KernelConditionReport {
    /// Applies the thresholds in `tol`.
    pub fn verdict(&self, tol: &Tolerances) -> ConditionVerdict {
        ConditionVerdict {
            beta: self.beta_c.is_finite() && self.beta_c > 0.0,
            gamma: self.gamma_l.is_finite(),
            zeta: self.is_even_real,
            eta: self.eta_min.is_finite() && self.eta_min > tol.eta_floor,
            theta: self.theta_sigma_min >= 0.0 && self.theta_probe_rel > tol.theta_probe_floor,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    /// Brute-force oracle: composite midpoint-free Gauss rule on a long
    /// symmetric interval, independent of the adaptive code path.
    fn brute_ft(alpha: f64, u: f64, t: f64, x_max: f64) -> f64 {
        let rule = GaussLegendre::new(20);
        let panels = 4000;
        let w = 2.0 * x_max / panels as f64;
        (0..panels)
            .map(|p| {
                let a = -x_max + w * p as f64;
                rule.integrate(a, a + w, |x| {
                    libm::exp(-u * libm::pow(x.abs(), alpha)) * (t * x).cos()
                })
            })
            .sum()
    }

    #[test]
    fn eval_examples() {
        let gauss = KernelFamily::new(2.0, 0.5, 2.0).unwrap();
        assert_eq!(gauss.eval(1.0, 0.0).unwrap(), 1.0);
        let lap = KernelFamily::new(1.0, 1.0, 3.0).unwrap();
        assert_relative_eq!(
            lap.eval(2.0, 1.0).unwrap(),
            (-2.0f64).exp(),
            epsilon = 1e-15
        );
        let frac = KernelFamily::new(0.5, 0.5, 2.0).unwrap();
        assert_relative_eq!(
            frac.eval(1.0, 4.0).unwrap(),
            (-2.0f64).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn eval_rejects_parameter_outside_interval() {
        let fam = KernelFamily::new(2.0, 0.5, 2.0).unwrap();
        assert!(matches!(
            fam.eval(3.0, 0.0),
            Err(Error::ParameterDomain { .. })
        ));
        assert!(matches!(
            fam.transform(0.1, 0.0),
            Err(Error::ParameterDomain { .. })
        ));
    }

    #[test]
    fn invalid_families() {
        assert!(KernelFamily::new(0.0, 0.5, 2.0).is_err());
        assert!(KernelFamily::new(2.0, 0.0, 2.0).is_err());
        assert!(KernelFamily::new(2.0, 2.0, 2.0).is_err());
        assert!(KernelFamily::with_nodes(2.0, 0.5, 2.0, vec![1.0, 1.0], vec![0.75, 0.75]).is_err());
        assert!(KernelFamily::with_nodes(2.0, 0.5, 2.0, vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn u_grid_weights_sum_to_interval_length() {
        let fam = KernelFamily::new(2.0, 0.5, 2.0).unwrap();
        let s: f64 = fam.u_weights().iter().sum();
        assert!((s - 1.5).abs() <= 1e-12 * 1.5);
        assert_eq!(fam.u_nodes().len(), 32);
    }

    #[test]
    fn transform_examples_against_brute_force() {
        // (α=1, u=1, t=0) → 2
        let oracle = brute_ft(1.0, 1.0, 0.0, 60.0);
        assert_relative_eq!(oracle, 2.0, epsilon = 1e-12);
        let lap = KernelFamily::new(1.0, 0.5, 2.0).unwrap();
        assert_relative_eq!(lap.transform(1.0, 0.0).unwrap(), oracle, epsilon = 1e-12);

        // (α=2, u=1, t=0) → √π ; (α=2, u=1, t=2) → √π e^{-1}
        let gauss = KernelFamily::new(2.0, 0.5, 2.0).unwrap();
        let o0 = brute_ft(2.0, 1.0, 0.0, 12.0);
        let o2 = brute_ft(2.0, 1.0, 2.0, 12.0);
        assert_relative_eq!(o0, 1.772_453_850_905_516, epsilon = 1e-13);
        assert_relative_eq!(o2, 0.652_049_332_173_292_2, epsilon = 1e-12);
        assert_relative_eq!(gauss.transform(1.0, 0.0).unwrap(), o0, epsilon = 1e-13);
        assert_relative_eq!(gauss.transform(1.0, 2.0).unwrap(), o2, epsilon = 1e-12);
    }

    #[test]
    fn general_alpha_quadrature_matches_brute_force() {
        let fam = KernelFamily::new(1.5, 0.5, 2.0).unwrap();
        for &(u, t) in &[(0.5, 0.0), (1.0, 1.3), (2.0, 4.0), (0.7, 9.0)] {
            let oracle = brute_ft(1.5, u, t, fam.truncation_radius());
            let got = fam.transform(u, t).unwrap();
            assert!(
                (got - oracle).abs() < 1e-10,
                "u={u} t={t}: {got} vs {oracle}"
            );
        }
    }

    #[test]
    fn transform_at_zero_is_l1_norm() {
        for alpha in [0.7, 1.0, 1.5, 2.0] {
            let fam = KernelFamily::new(alpha, 0.5, 2.0).unwrap();
            for &u in &[0.5, 1.1, 2.0] {
                let q = fam.transform_quadrature(u, 0.0).unwrap().value;
                let n = fam.l1_norm(u).unwrap();
                assert!((q - n).abs() <= 1e-8 * n, "alpha={alpha} u={u}");
            }
        }
    }

    #[test]
    fn second_derivative_closed_forms_match_differences() {
        for alpha in [1.0, 2.0] {
            let fam = KernelFamily::new(alpha, 0.5, 3.0).unwrap();
            for &(u, t) in &[(1.0, 0.3), (2.5, 2.0), (0.6, 1.0)] {
                let h = 1e-3;
                let f = |s: f64| fam.transform(u, s).unwrap();
                let fd = (-f(t + 2.0 * h) + 16.0 * f(t + h) - 30.0 * f(t) + 16.0 * f(t - h)
                    - f(t - 2.0 * h))
                    / (12.0 * h * h);
                assert_relative_eq!(
                    fam.transform_second_derivative(u, t, h).unwrap(),
                    fd,
                    max_relative = 1e-6
                );
            }
        }
    }

    #[test]
    fn time_rule_integrates_kernel() {
        for alpha in [0.5, 1.0, 2.0] {
            let fam = KernelFamily::new(alpha, 0.5, 2.0).unwrap();
            let rule = fam.time_rule(1.0, PI).unwrap();
            let mass = rule.apply(|_| Complex64::new(1.0, 0.0)).re;
            assert_relative_eq!(mass, fam.l1_norm(1.0).unwrap(), max_relative = 1e-9);
            let c = rule.apply(|s| Complex64::new((2.0 * s).cos(), 0.0)).re;
            assert_relative_eq!(c, fam.transform(1.0, 2.0).unwrap(), epsilon = 1e-9);
        }
    }

    #[test]
    fn gaussian_conditions() {
        let fam = KernelFamily::new(2.0, 0.5, 2.0).unwrap();
        let tol = Tolerances::default();
        let r = fam
            .verify_conditions(PI, 64, Complex64::new(0.0, 0.0), &tol)
            .unwrap();
        assert!(r.is_even_real);
        // Grid oracle: the Gaussian transform is decreasing in t and
        // increasing in u at t = π, so the minimum sits at t = σ, u = max node.
        let u_max = *fam.u_nodes().last().unwrap();
        let oracle = (PI / u_max).sqrt() * (-PI * PI / (4.0 * u_max)).exp();
        assert_relative_eq!(r.eta_min, oracle, max_relative = 1e-12);
        assert!(r.eta_min > 0.0);
        assert!(r.beta_c.is_finite() && r.beta_c >= 1.0);
        assert!(r.theta_sigma_min >= -1e-10);
        assert!(r.verdict(&tol).all(), "{r:?}");
    }

    #[test]
    fn laplace_completeness_proxy_positive() {
        let fam = KernelFamily::new(1.0, 1.0, 3.0).unwrap();
        let tol = Tolerances::default();
        let r = fam
            .verify_conditions(PI, 256, Complex64::new(0.0, 0.0), &tol)
            .unwrap();
        assert!(r.theta_sigma_min >= 0.0);
        assert!(r.theta_probe_rel > 1e-8);

        // Eigenvalue oracle on the probe Gram matrix: 2u/(u²+t²) second
        // derivatives on the 256-point grid, 4 spread nodes, built by hand.
        let n = 256;
        let h = PI / (n - 1) as f64;
        let picks = [0usize, 10, 21, 31];
        let us: Vec<f64> = picks.iter().map(|&i| fam.u_nodes()[i]).collect();
        let mut g = nalgebra::DMatrix::<f64>::zeros(4, 4);
        for j in 0..n {
            let t = h * j as f64;
            let w = if j == 0 || j == n - 1 { 0.5 * h } else { h };
            let v: Vec<f64> = us
                .iter()
                .map(|&u| 4.0 * u * (3.0 * t * t - u * u) / (u * u + t * t).powi(3))
                .collect();
            for a in 0..4 {
                for b in 0..4 {
                    g[(a, b)] += w * v[a] * v[b];
                }
            }
        }
        let eig = g.symmetric_eigenvalues();
        let (lo, hi) = eig
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &e| (l.min(e), h.max(e)));
        assert!(lo > 0.0);
        assert_relative_eq!(r.theta_probe_rel, lo / hi, max_relative = 1e-5);
    }

    #[test]
    fn lipschitz_matches_l1_norm_differences() {
        // u ↦ φ_u is monotone, so ‖φ_a − φ_b‖₁ = |‖φ_a‖₁ − ‖φ_b‖₁|.
        let fam = KernelFamily::new(2.0, 0.5, 2.0).unwrap();
        let d = fam.l1_distance(0.8, 1.3).unwrap();
        let exact = (PI / 0.8).sqrt() - (PI / 1.3).sqrt();
        assert_relative_eq!(d, exact, max_relative = 1e-10);
    }

    #[test]
    fn l1_sup_attained_at_smallest_node() {
        let fam = KernelFamily::new(1.5, 0.5, 2.0).unwrap();
        let norms: Vec<f64> = fam
            .u_nodes()
            .iter()
            .map(|&u| fam.transform(u, 0.0).unwrap())
            .collect();
        assert!(norms.windows(2).all(|p| p[0] > p[1]));
    }
}
