use std::f64::consts::PI;
use std::sync::OnceLock;

use dynsamp_core::bandlimited::{BandlimitedFn, SpectrumGrid};
use dynsamp_core::operator::FrameReport;
use dynsamp_core::quadrature::GaussLegendre;
use dynsamp_core::{
    Complex64, Jitter, KernelFamily, ReconstructParams, SamplingOperator, SamplingSet,
};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c(a, b)), n)
}

/// Smooth spectrum `p(t/σ)·(1 - (t/σ)²)⁴` with a random cubic `p`.
fn tapered(grid: SpectrumGrid, coef: &[Complex64]) -> BandlimitedFn {
    let sigma = grid.sigma();
    BandlimitedFn::from_fn(grid, |t| {
        let s = t / sigma;
        let p = coef.iter().rev().fold(c(0.0, 0.0), |acc, k| acc * s + k);
        p * (1.0 - s * s).powi(4)
    })
}

/// `∫_a^b g` by 8-point Gauss panels of width 0.25.
fn composite<F: FnMut(f64) -> f64>(a: f64, b: f64, mut g: F) -> f64 {
    let rule = GaussLegendre::new(8);
    let panels = ((b - a) / 0.25).ceil() as usize;
    let w = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + w * p as f64;
            rule.integrate(lo, lo + w, &mut g)
        })
        .sum()
}

/// Direct time-domain `(f ∗ φ_u)(x)` for the Gaussian kernel.
fn gaussian_conv(f: &BandlimitedFn, u: f64, x: f64) -> Complex64 {
    let reach = (40.0 / u).sqrt();
    let re = composite(-reach, reach, |s| (-u * s * s).exp() * f.eval(x - s).re);
    let im = composite(-reach, reach, |s| (-u * s * s).exp() * f.eval(x - s).im);
    c(re, im)
}

fn default_family() -> KernelFamily {
    KernelFamily::new(2.0, 0.5, 2.0).unwrap()
}

struct Fixture {
    op: SamplingOperator,
    report: FrameReport,
}

fn jittered_fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let set =
            SamplingSet::jittered(1.0, &Jitter::Alternating { amplitude: 0.2 }, (-10.0, 10.0))
                .unwrap();
        let op = SamplingOperator::assemble(
            &set,
            &default_family(),
            SpectrumGrid::periodic(PI, 20.0).unwrap(),
        )
        .unwrap();
        let report = op.frame_bounds().unwrap();
        Fixture { op, report }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn plancherel_matches_time_domain_energy(coef in complex_vec(4)) {
        let grid = SpectrumGrid::new(PI, 64).unwrap();
        let f = tapered(grid, &coef);
        prop_assume!(f.l2_norm_sq() > 1e-6);
        // Period 2π/h ≈ 63; the taper makes the tails beyond ±25 negligible.
        let energy = composite(-25.0, 25.0, |x| f.eval(x).norm_sqr());
        let rel = (energy - f.l2_norm_sq()).abs() / f.l2_norm_sq();
        prop_assert!(rel < 1e-4, "relative mismatch {rel}");
    }

    #[test]
    fn convolution_theorem(coef in complex_vec(4), u in 0.5f64..2.0, x in -5.0f64..5.0) {
        let grid = SpectrumGrid::new(PI, 64).unwrap();
        let f = tapered(grid, &coef);
        // Σ w|F|/2π bounds the sup norm; scale to ‖f‖∞ ≤ 1.
        let bound: f64 = f.values().iter().zip(grid.weights()).map(|(v, w)| v.norm() * w).sum::<f64>() / (2.0 * PI);
        prop_assume!(bound > 1e-9);
        let f = f.combine(c(1.0 / bound, 0.0), &BandlimitedFn::zero(grid), c(0.0, 0.0)).unwrap();
        let fam = KernelFamily::with_nodes(2.0, 0.5, 2.0, vec![u], vec![1.5]).unwrap();
        let spectral = f.convolve(&fam, u).unwrap().eval(x);
        let direct = gaussian_conv(&f, u, x);
        prop_assert!((spectral - direct).norm() < 1e-6, "{spectral} vs {direct}");
    }

    #[test]
    fn bernstein_inequality(values in complex_vec(32)) {
        let grid = SpectrumGrid::new(PI, 32).unwrap();
        let f = BandlimitedFn::from_values(grid, values).unwrap();
        let period = grid.period();
        let window = (-0.5 * period, 0.5 * period);
        let sup = f.sup_norm_refined(window, 64.0).unwrap();
        let dsup = f.derivative().sup_norm(window, 64.0).unwrap();
        prop_assert!(dsup <= PI * sup * (1.0 + 1e-3), "{dsup} > σ·{sup}");
    }

    #[test]
    fn eval_and_convolve_are_linear(
        fv in complex_vec(24),
        gv in complex_vec(24),
        a in (-2.0f64..2.0, -2.0f64..2.0),
        b in (-2.0f64..2.0, -2.0f64..2.0),
        x in -20.0f64..20.0,
    ) {
        let grid = SpectrumGrid::new(2.0, 24).unwrap();
        let (a, b) = (c(a.0, a.1), c(b.0, b.1));
        let f = BandlimitedFn::from_values(grid, fv).unwrap();
        let g = BandlimitedFn::from_values(grid, gv).unwrap();
        let h = f.combine(a, &g, b).unwrap();
        prop_assert!((h.eval(x) - (a * f.eval(x) + b * g.eval(x))).norm() < 1e-12);
        let fam = default_family();
        let ch = h.convolve(&fam, 1.3).unwrap();
        let cf = f.convolve(&fam, 1.3).unwrap();
        let cg = g.convolve(&fam, 1.3).unwrap();
        prop_assert!((ch.eval(x) - (a * cf.eval(x) + b * cg.eval(x))).norm() < 1e-12);
    }

    #[test]
    fn separation_and_gap_translation_invariant(
        ticks in prop::collection::btree_set(-4096i32..4096, 2..40),
        shift in -100_000i32..100_000,
    ) {
        // Dyadic points and shifts keep every difference exact.
        let pts: Vec<f64> = ticks.iter().map(|&k| k as f64 / 1024.0).collect();
        let s = SamplingSet::new(pts, (-4.5, 4.5)).unwrap();
        let t = s.translated(shift as f64 / 1024.0);
        prop_assert_eq!(s.separation().unwrap(), t.separation().unwrap());
        prop_assert_eq!(s.max_gap(), t.max_gap());
    }

    #[test]
    fn progression_distance_translation_invariant(amp in 0.0f64..0.2, seed in 0u64..1000, shift in -3.0f64..3.0) {
        let s = SamplingSet::jittered(1.0, &Jitter::Uniform { amplitude: amp, seed }, (-12.0, 12.0)).unwrap();
        let d0 = s.progression_distance((0.9, 1.1), &[256, 32, 32]).unwrap().dist;
        let d1 = s.translated(shift).progression_distance((0.9, 1.1), &[256, 32, 32]).unwrap().dist;
        // b is optimised exactly, so only the a-search resolution remains.
        prop_assert!((d0 - d1).abs() <= 1e-6, "{d0} vs {d1}");
    }

    #[test]
    fn alternating_progression_distance_equals_amplitude(eps in 0.01f64..0.24) {
        let s = SamplingSet::jittered(1.0, &Jitter::Alternating { amplitude: eps }, (-25.0, 25.0)).unwrap();
        let d = s.progression_distance((0.9, 1.1), &[256, 32, 32]).unwrap().dist;
        prop_assert!(d <= eps * (1.0 + 1e-9) && d >= eps * (1.0 - 1e-3), "{d} vs {eps}");
    }

    #[test]
    fn zero_jitter_is_bit_identical(a in 0.2f64..5.0, lo in -30.0f64..0.0, len in 1.0f64..60.0) {
        let w = (lo, lo + len);
        let ar = SamplingSet::arithmetic(a, 0.0, w);
        let jt = SamplingSet::jittered(a, &Jitter::None, w);
        match (ar, jt) {
            (Ok(x), Ok(y)) => {
                let xb: Vec<u64> = x.points().iter().map(|p| p.to_bits()).collect();
                let yb: Vec<u64> = y.points().iter().map(|p| p.to_bits()).collect();
                prop_assert_eq!(xb, yb);
            }
            (Err(x), Err(y)) => prop_assert_eq!(x, y),
            (x, y) => prop_assert!(false, "{x:?} vs {y:?}"),
        }
    }

    #[test]
    fn frame_sandwich(values in complex_vec(21)) {
        let fx = jittered_fixture();
        let grid = *fx.op.grid();
        prop_assume!(values.iter().any(|v| v.norm() > 1e-3));
        let f = BandlimitedFn::from_values(grid, values).unwrap();
        let norm = f.l2_norm();
        let f = f.combine(c(1.0 / norm, 0.0), &BandlimitedFn::zero(grid), c(0.0, 0.0)).unwrap();
        let samples = fx.op.apply(&f).unwrap();
        let energy: f64 = samples.iter().zip(fx.op.row_weights()).map(|(s, w)| w * w * s.norm_sqr()).sum();
        prop_assert!(energy >= fx.report.a_hat * (1.0 - 1e-6));
        prop_assert!(energy <= fx.report.b_hat * (1.0 + 1e-6));
    }

    #[test]
    fn frame_bounds_grow_with_nested_sets(keep in prop::collection::vec(any::<bool>(), 11), extra in 0usize..11) {
        let full = SamplingSet::jittered(1.0, &Jitter::Uniform { amplitude: 0.3, seed: 3 }, (-5.0, 5.0)).unwrap();
        let pts = full.points();
        let mut chosen: Vec<f64> = pts.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| *p).collect();
        prop_assume!(!chosen.is_empty() && chosen.len() < pts.len());
        let small = SamplingSet::new(chosen.clone(), full.window()).unwrap();
        let missing: Vec<f64> = pts.iter().copied().filter(|p| !chosen.contains(p)).collect();
        chosen.push(missing[extra % missing.len()]);
        let big = SamplingSet::new(chosen, full.window()).unwrap();
        let grid = SpectrumGrid::periodic(PI, 10.0).unwrap();
        let fam = KernelFamily::with_node_count(2.0, 0.5, 2.0, 8).unwrap();
        let rs = SamplingOperator::assemble(&small, &fam, grid).unwrap().frame_bounds().unwrap();
        let rb = SamplingOperator::assemble(&big, &fam, grid).unwrap().frame_bounds().unwrap();
        let slack = 1e-12 * rb.b_hat;
        prop_assert!(rb.a_hat >= rs.a_hat - slack);
        prop_assert!(rb.b_hat >= rs.b_hat - slack);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn operator_agrees_with_time_domain_convolution(coef in complex_vec(4), row in 0usize..672) {
        let fx = jittered_fixture();
        let grid = *fx.op.grid();
        let f = tapered(grid, &coef);
        let samples = fx.op.apply(&f).unwrap();
        let meta = fx.op.rows()[row % fx.op.rows().len()];
        let direct = gaussian_conv(&f, meta.u, meta.lambda);
        prop_assert!((samples[row % samples.len()] - direct).norm() < 1e-6);
    }
}

#[test]
fn reconstruction_error_vanishes_with_regularization() {
    let fx = jittered_fixture();
    assert!(!fx.report.near_zero);
    let grid = *fx.op.grid();
    let truth = BandlimitedFn::sinc(grid, 0.5);
    let samples = fx.op.apply(&truth).unwrap();
    let mut errors = Vec::new();
    for reg in [1e-6, 1e-9, 1e-12] {
        let params = ReconstructParams {
            regularization: Some(reg),
            ..Default::default()
        };
        let res = fx.op.reconstruct(&samples, &params, Some(&truth)).unwrap();
        assert!(res.residual_history.windows(2).all(|w| w[1] <= w[0]));
        errors.push(res.relative_l2_error.unwrap());
    }
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] < 1e-8, "{errors:?}");
}
