//! Finite sampling sets and their diagnostics.
//!
//! The theory concerns infinite uniformly discrete sets; here a set is a
//! finite sorted list of points inside a closed window `[lo, hi]`. Window
//! edges count toward [`SamplingSet::max_gap`], and
//! [`SamplingSet::progression_distance`] measures how far the points are
//! from a single arithmetic progression. Both are one-window surrogates.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// Perturbation model for [`SamplingSet::jittered`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "model", rename_all = "snake_case"))]
pub enum Jitter {
    /// No perturbation.
    None,
    /// `amplitude·(-1)^k`.
    Alternating {
        /// Jitter size.
        amplitude: f64,
    },
    /// Independent uniform draws from `[-amplitude, amplitude]`. The draw
    /// for index `k` depends only on `seed` and `k`.
    Uniform {
        /// Jitter bound.
        amplitude: f64,
        /// Generator seed.
        seed: u64,
    },
    /// Explicit values: index `k` gets `values[k - first_index]`, zero
    /// outside the list.
    Values {
        /// Progression index of `values[0]`.
        first_index: i64,
        /// Jitter per index.
        values: Vec<f64>,
    },
}

impl Jitter {
    /// Jitter of progression index `k`.
    pub fn value(&self, k: i64) -> f64 {
        match self {
            Jitter::None => 0.0,
            Jitter::Alternating { amplitude } => {
                if k.rem_euclid(2) == 0 {
                    *amplitude
                } else {
                    -amplitude
                }
            }
            Jitter::Uniform { amplitude, seed } => {
                if *amplitude == 0.0 {
                    return 0.0;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(k as u64);
                rng.random_range(-*amplitude..=*amplitude)
            }
            Jitter::Values {
                first_index,
                values,
            } => {
                let i = k - first_index;
                if i < 0 {
                    0.0
                } else {
                    values.get(i as usize).copied().unwrap_or(0.0)
                }
            }
        }
    }

    /// Largest possible `|jitter|`, used to size the index range.
    fn bound(&self) -> f64 {
        match self {
            Jitter::None => 0.0,
            Jitter::Alternating { amplitude } | Jitter::Uniform { amplitude, .. } => {
                libm::fabs(*amplitude)
            }
            Jitter::Values { values, .. } => values.iter().fold(0.0, |m, v| m.max(libm::fabs(*v))),
        }
    }
}

/// Best progression fit returned by [`SamplingSet::progression_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProgressionFit {
    /// `max_k min_m |λ_k - b - m/a|` at the optimum.
    pub dist: f64,
    /// Optimal density `a`.
    pub a: f64,
    /// Optimal offset `b`, reduced to `[0, 1/a)`.
    pub b: f64,
}

/// A finite, strictly increasing point set inside a closed window.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplingSet {
    points: Vec<f64>,
    window: (f64, f64),
    spacing: Option<f64>,
}

impl SamplingSet {
    /// Sorts `points` and checks they are distinct, finite and inside
    /// `window`.
    pub fn new(mut points: Vec<f64>, window: (f64, f64)) -> Result<Self> {
        check_window(window)?;
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(invalid("points must be finite"));
        }
        points.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("points must be distinct"));
        }
        if points[0] < window.0 || points[points.len() - 1] > window.1 {
            return Err(invalid("points must lie inside the window"));
        }
        Ok(Self {
            points,
            window,
            spacing: None,
        })
    }

    /// All points of `b + (1/a)·Z` inside `window`.
    pub fn arithmetic(a: f64, b: f64, window: (f64, f64)) -> Result<Self> {
        check_density(a)?;
        check_window(window)?;
        let (k_lo, k_hi) = index_range(a, b, window, 0.0);
        let points: Vec<f64> = (k_lo..=k_hi)
            .map(|k| b + k as f64 / a)
            .filter(|p| *p >= window.0 && *p <= window.1)
            .collect();
        Self::from_sorted(points, window, a)
    }

    /// Points `k/a + jitter_k` inside `window`; requires `|jitter_k| < 1/(2a)`.
    ///
    /// With [`Jitter::None`] the result is bit-identical to
    /// `arithmetic(a, 0, window)`.
    pub fn jittered(a: f64, jitter: &Jitter, window: (f64, f64)) -> Result<Self> {
        check_density(a)?;
        check_window(window)?;
        let limit = 0.5 / a;
        let (k_lo, k_hi) = index_range(a, 0.0, window, jitter.bound().min(limit));
        let mut points = Vec::with_capacity((k_hi - k_lo + 1).max(0) as usize);
        for k in k_lo..=k_hi {
            let j = jitter.value(k);
            if !(libm::fabs(j) < limit) {
                return Err(Error::InvalidJitter {
                    index: k,
                    value: j,
                    limit,
                });
            }
            let p = 0.0 + k as f64 / a + j;
            if p >= window.0 && p <= window.1 {
                points.push(p);
            }
        }
        Self::from_sorted(points, window, a)
    }

    fn from_sorted(points: Vec<f64>, window: (f64, f64), a: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self {
            points,
            window,
            spacing: Some(1.0 / a),
        })
    }

    /// Sorted points.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Closed window `[lo, hi]`.
    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    /// Nominal spacing `1/a` for sets built from a progression.
    pub fn nominal_spacing(&self) -> Option<f64> {
        self.spacing
    }

    /// Records a nominal spacing, e.g. after import.
    pub fn with_nominal_spacing(mut self, spacing: Option<f64>) -> Self {
        self.spacing = spacing;
        self
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; sets are nonempty.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points and window shifted by `c`.
    pub fn translated(&self, c: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| p + c).collect(),
            window: (self.window.0 + c, self.window.1 + c),
            spacing: self.spacing,
        }
    }

    /// The set with every point in the open interval `(lo, hi)` removed.
    pub fn without_interval(&self, lo: f64, hi: f64) -> Result<Self> {
        let points: Vec<f64> = self
            .points
            .iter()
            .copied()
            .filter(|&p| p <= lo || p >= hi)
            .collect();
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self {
            points,
            window: self.window,
            spacing: self.spacing,
        })
    }

    /// Separation `δ(Λ)`: smallest adjacent difference.
    pub fn separation(&self) -> Result<f64> {
        if self.points.len() < 2 {
            return Err(Error::UndefinedSeparation);
        }
        Ok(self
            .points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min))
    }

    /// Largest adjacent difference or boundary gap to the window edges.
    pub fn max_gap(&self) -> f64 {
        let n = self.points.len();
        let edges = (self.points[0] - self.window.0).max(self.window.1 - self.points[n - 1]);
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(edges, f64::max)
    }

    /// Distance to the nearest arithmetic progression `b + (1/a)·Z` with
    /// `a ∈ a_range`.
    ///
    /// For fixed `a` the optimal `b` is exact: the residues `λ·a mod 1` are
    /// covered by the shortest circular arc, and the distance is half that
    /// arc divided by `a`. The search over `a` starts on a uniform grid of
    /// `grid_sizes[0]` points (raised to `8·(a_hi - a_lo)·span` so that the
    /// narrow minima are resolved) and refines the best cells once per
    /// further entry of `grid_sizes`. A least-squares step snaps onto
    /// exact progressions and a golden-section polish settles each
    /// candidate minimum. Ties go to the smallest `a`.
    pub fn progression_distance(
        &self,
        a_range: (f64, f64),
        grid_sizes: &[usize],
    ) -> Result<ProgressionFit> {
        let (lo, hi) = a_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(invalid("a_range must satisfy 0 < a_lo <= a_hi"));
        }
        let span = self.points[self.points.len() - 1] - self.points[0];
        let coarse = grid_sizes.first().copied().unwrap_or(256).max(2);
        let coarse = coarse.max(libm::ceil(8.0 * (hi - lo) * span) as usize + 1);
        let mut cands: Vec<(f64, f64)> = uniform(lo, hi, coarse)
            .map(|a| (self.fit_at(a).dist, a))
            .collect();
        let mut step = if coarse > 1 {
            (hi - lo) / (coarse - 1) as f64
        } else {
            0.0
        };
        let mut best = best_of(&cands);

        for &n in grid_sizes.iter().skip(1) {
            let n = n.max(3);
            let keep = top_candidates(&cands, 8);
            let mut next = Vec::new();
            for a0 in keep {
                let (a, b) = ((a0 - step).max(lo), (a0 + step).min(hi));
                next.extend(uniform(a, b, n).map(|a| (self.fit_at(a).dist, a)));
            }
            step = 2.0 * step / (n - 1) as f64;
            best = better(best, best_of(&next));
            cands = next;
        }

        for a0 in top_candidates(&cands, 8) {
            let (a, b) = ((a0 - step).max(lo), (a0 + step).min(hi));
            let polished = self.golden(a, b);
            best = better(best, (self.fit_at(polished).dist, polished));
            if let Some(a) = self.snap(a0) {
                if a >= lo && a <= hi {
                    best = better(best, (self.fit_at(a).dist, a));
                }
            }
        }
        Ok(self.fit_at(best.1))
    }

    /// Exact optimal `b` and distance for a fixed `a`.
    fn fit_at(&self, a: f64) -> ProgressionFit {
        let mut r: Vec<f64> = self.points.iter().map(|&p| frac(p * a)).collect();
        r.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        let n = r.len();
        // Circular gaps; the wrap-around gap closes the circle.
        let mut gap = r[0] + 1.0 - r[n - 1];
        let mut start = r[0];
        for i in 1..n {
            let g = r[i] - r[i - 1];
            if g > gap {
                gap = g;
                start = r[i];
            }
        }
        let arc = (1.0 - gap).max(0.0);
        let centre = frac(start + 0.5 * arc);
        ProgressionFit {
            dist: arc / (2.0 * a),
            a,
            b: centre / a,
        }
    }

    /// Golden-section minimum of the distance on `[lo, hi]`; the minima are
    /// V-shaped, so this converges onto the kink.
    fn golden(&self, mut lo: f64, mut hi: f64) -> f64 {
        let r = 0.5 * (libm::sqrt(5.0) - 1.0);
        let d = |a: f64| self.fit_at(a).dist;
        let mut x1 = hi - r * (hi - lo);
        let mut x2 = lo + r * (hi - lo);
        let (mut f1, mut f2) = (d(x1), d(x2));
        for _ in 0..200 {
            if hi - lo <= 1e-15 * hi {
                break;
            }
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - r * (hi - lo);
                f1 = d(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + r * (hi - lo);
                f2 = d(x2);
            }
        }
        if f1 <= f2 {
            x1
        } else {
            x2
        }
    }

    /// Least-squares fit `λ_k ≈ b + m_k·s` with the integers `m_k` read off
    /// at density `a`; returns `1/s`.
    fn snap(&self, a: f64) -> Option<f64> {
        let fit = self.fit_at(a);
        let n = self.points.len() as f64;
        if n < 2.0 {
            return None;
        }
        let ms: Vec<f64> = self
            .points
            .iter()
            .map(|&p| libm::round((p - fit.b) * a))
            .collect();
        let mm = ms.iter().sum::<f64>() / n;
        let pm = self.points.iter().sum::<f64>() / n;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (m, p) in ms.iter().zip(&self.points) {
            sxy += (m - mm) * (p - pm);
            sxx += (m - mm) * (m - mm);
        }
        if sxx == 0.0 || sxy <= 0.0 {
            return None;
        }
        Some(sxx / sxy)
    }
}

fn check_density(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid("density a must be positive"));
    }
    Ok(())
}

fn check_window(window: (f64, f64)) -> Result<()> {
    if !(window.0 < window.1) || !window.0.is_finite() || !window.1.is_finite() {
        return Err(invalid("window must satisfy lo < hi"));
    }
    Ok(())
}

/// Indices `k` whose point `b + k/a ± pad` can reach the window.
fn index_range(a: f64, b: f64, window: (f64, f64), pad: f64) -> (i64, i64) {
    let k_lo = libm::ceil((window.0 - pad - b) * a) as i64 - 1;
    let k_hi = libm::floor((window.1 + pad - b) * a) as i64 + 1;
    (k_lo, k_hi)
}

fn frac(x: f64) -> f64 {
    let f = x - libm::floor(x);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn uniform(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64
        }
    })
}

fn better(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    let tie = 1e-13 * x.0.max(y.0).max(1e-300);
    if y.0 < x.0 - tie || (libm::fabs(y.0 - x.0) <= tie && y.1 < x.1) {
        y
    } else {
        x
    }
}

fn best_of(c: &[(f64, f64)]) -> (f64, f64) {
    c.iter()
        .copied()
        .fold((f64::INFINITY, f64::INFINITY), better)
}

/// `a` values of the `k` lowest local minima (by distance) in `c`.
fn top_candidates(c: &[(f64, f64)], k: usize) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..c.len()).collect();
    idx.sort_by(|&i, &j| {
        c[i].0
            .partial_cmp(&c[j].0)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(
                c[i].1
                    .partial_cmp(&c[j].1)
                    .unwrap_or(core::cmp::Ordering::Equal),
            )
    });
    idx.into_iter().take(k).map(|i| c[i].1).collect()
}
