//! Gauss–Legendre rules and adaptive panel integration.
//!
//! Nodes are computed by Newton iteration on the three-term Legendre
//! recurrence, which is accurate to a few ulps for the rule sizes used here
//! (up to a few hundred points).

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule with `n >= 1` points, nodes in increasing order.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, largest root first.
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if libm::fabs(dx) <= 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false; a rule has at least one node.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes on `[-1, 1]`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights on `[-1, 1]`, summing to 2.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Integrates `f` over `[a, b]` with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Evaluates the Legendre polynomial `P_n(x)`.
pub fn legendre(n: usize, x: f64) -> f64 {
    legendre_with_derivative(n, x).0
}

/// Settings for [`adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdaptiveConfig {
    /// Absolute tolerance on the whole integral.
    pub abs_tol: f64,
    /// Upper bound on the number of accepted panels.
    pub max_panels: usize,
    /// Deepest allowed bisection level.
    pub max_depth: u32,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            max_panels: 1 << 20,
            max_depth: 60,
        }
    }
}

/// Integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    /// Approximate integral.
    pub value: f64,
    /// Sum of per-panel error estimates.
    pub error: f64,
}

/// Adaptive Gauss–Legendre integration of `f` over `[a, b]`.
///
/// The interval is first cut into `initial_panels` equal panels. A panel is
/// accepted when the rule on the whole panel and on its two halves agree to
/// within the panel's share of `abs_tol`, or to within roundoff of the
/// panel's absolute integral; otherwise it is bisected.
pub fn adaptive<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    initial_panels: usize,
    cfg: &AdaptiveConfig,
    mut f: F,
) -> Result<Estimate> {
    let total = b - a;
    if total == 0.0 {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let initial_panels = initial_panels.max(1);
    let width = total / initial_panels as f64;
    // (lo, hi, depth, cached (integral, integral of |f|) over the panel)
    #[allow(clippy::type_complexity)]
    let mut stack: Vec<(f64, f64, u32, Option<(f64, f64)>)> = (0..initial_panels)
        .rev()
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == initial_panels {
                b
            } else {
                lo + width
            };
            (lo, hi, 0, None)
        })
        .collect();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut magnitude = 0.0;
    let mut accepted = 0usize;
    let floor = 64.0 * f64::EPSILON;
    while let Some((lo, hi, depth, cached)) = stack.pop() {
        let (whole, _) = match cached {
            Some(c) => c,
            None => apply(rule, lo, hi, &mut f),
        };
        let mid = 0.5 * (lo + hi);
        let left = apply(rule, lo, mid, &mut f);
        let right = apply(rule, mid, hi, &mut f);
        let refined = left.0 + right.0;
        let mag = left.1 + right.1;
        let est = libm::fabs(refined - whole);
        let share = cfg.abs_tol * libm::fabs(hi - lo) / libm::fabs(total);
        if est <= share.max(floor * mag) || depth >= cfg.max_depth || accepted >= cfg.max_panels {
            value += refined;
            error += est;
            magnitude += mag;
            accepted += 1;
        } else {
            stack.push((mid, hi, depth + 1, Some(right)));
            stack.push((lo, mid, depth + 1, Some(left)));
        }
    }
    if error > cfg.abs_tol + floor * magnitude {
        return Err(Error::NumericalAccuracy {
            estimate: error,
            tolerance: cfg.abs_tol,
        });
    }
    Ok(Estimate { value, error })
}

/// Rule applied on `[lo, hi]`: integral of `f` and of `|f|`.
fn apply<F: FnMut(f64) -> f64>(rule: &GaussLegendre, lo: f64, hi: f64, f: &mut F) -> (f64, f64) {
    rule.mapped(lo, hi).fold((0.0, 0.0), |(s, m), (x, w)| {
        let v = w * f(x);
        (s + v, m + libm::fabs(v))
    })
}

/// Trapezoid weights for `n` uniform nodes with spacing `h`.
pub fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = alloc::vec![h; n];
    if n >= 1 {
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
    }
    if n == 1 {
        w[0] = 0.0;
    }
    w
}

/// Endpoint-corrected (Gregory) trapezoid weights, exact for cubics.
///
/// Falls back to plain trapezoid weights when `n < 6`.
pub fn gregory_weights(n: usize, h: f64) -> Vec<f64> {
    if n < 6 {
        return trapezoid_weights(n, h);
    }
    let mut w = alloc::vec![h; n];
    let ends = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
    for (i, c) in ends.iter().enumerate() {
        w[i] = c * h;
        w[n - 1 - i] = c * h;
    }
    w
}

/// Gauss–Legendre nodes and weights for the interval `[lo, hi]`, increasing.
pub fn gauss_legendre_interval(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    GaussLegendre::new(n).mapped(lo, hi).unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33, 64, 128] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights().iter().sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        let rule = GaussLegendre::new(8);
        for k in 0..16 {
            let got = rule.integrate(-1.0, 1.0, |x| libm::pow(x, k as f64));
            let exact = if k % 2 == 0 {
                2.0 / (k as f64 + 1.0)
            } else {
                0.0
            };
            assert_relative_eq!(got, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn nodes_are_legendre_roots() {
        let rule = GaussLegendre::new(20);
        for &x in rule.nodes() {
            assert!(legendre(20, x).abs() < 1e-13);
        }
        assert!(rule.nodes().windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn adaptive_handles_oscillation_and_kink() {
        let rule = GaussLegendre::new(16);
        let cfg = AdaptiveConfig::default();
        let est = adaptive(&rule, 0.0, 40.0, 4, &cfg, |x| {
            libm::exp(-x) * libm::cos(10.0 * x)
        })
        .unwrap();
        // ∫_0^∞ e^{-x} cos(10x) dx = 1/101, tail e^{-40} negligible.
        assert_relative_eq!(est.value, 1.0 / 101.0, epsilon = 1e-13);
        let est = adaptive(&rule, -1.0, 1.0, 1, &cfg, |x| libm::sqrt(libm::fabs(x))).unwrap();
        assert_relative_eq!(est.value, 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn adaptive_reports_non_convergence() {
        let rule = GaussLegendre::new(4);
        let cfg = AdaptiveConfig {
            abs_tol: 1e-15,
            max_panels: 4,
            max_depth: 2,
        };
        let err = adaptive(&rule, 0.0, 1.0, 1, &cfg, |x| libm::sin(200.0 * x)).unwrap_err();
        assert!(matches!(err, Error::NumericalAccuracy { .. }));
    }

    #[test]
    fn gregory_is_cubic_exact() {
        let n = 33;
        let h = 2.0 / (n - 1) as f64;
        let w = gregory_weights(n, h);
        let s: f64 = w
            .iter()
            .enumerate()
            .map(|(j, wj)| {
                let t = -1.0 + h * j as f64;
                wj * (t * t * t + 2.0 * t * t - t + 1.0)
            })
            .sum();
        assert_relative_eq!(s, 4.0 / 3.0 + 2.0, epsilon = 1e-14);
    }
}
