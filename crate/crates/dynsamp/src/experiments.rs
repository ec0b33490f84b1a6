//! The five experiment pipelines behind the CLI subcommands.
//!
//! Every command validates its configuration, computes, writes its files
//! atomically into `cfg.out_dir` and returns an [`Outcome`] whose `pass`
//! flag drives the process exit code. Outputs contain no timestamps or
//! paths other than those in the configuration, so identical inputs give
//! byte-identical files.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use dynsamp_core::bandlimited::{near_null_witness_with_len, ClosedForm};
use dynsamp_core::kernels::ConditionVerdict;
use dynsamp_core::operator::annihilation_test;
use dynsamp_core::{
    BandlimitedFn, Complex64, FrameReport, KernelConditionReport, KernelFamily, ReconstructParams,
    SamplingOperator, SamplingSet, SpectrumGrid, ThetaProbe,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::config::{ExperimentConfig, TestSignal};
use crate::error::{CliError, Result};
use crate::fit::{loglog_fit, LogLogFit};
use crate::io;

/// Warning attached to reconstructions whose lower frame bound vanishes.
pub const UNSTABLE: &str = "unstable configuration";

/// One pass/fail check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    /// Identifier.
    pub name: String,
    /// Measured value.
    pub value: f64,
    /// Human-readable acceptance rule.
    pub rule: String,
    /// Whether the rule holds.
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, rule: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            rule: rule.into(),
            pass,
        }
    }
}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct Outcome<T> {
    /// Computed data, as written to the JSON report.
    pub data: T,
    /// Checks against the configured thresholds.
    pub checks: Vec<Check>,
    /// Non-fatal conditions worth reporting.
    pub warnings: Vec<String>,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
}

impl<T> Outcome<T> {
    /// All checks pass.
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Serialize)]
struct Document<'a, T> {
    command: &'a str,
    versions: std::collections::BTreeMap<&'static str, &'static str>,
    config: &'a ExperimentConfig,
    pass: bool,
    checks: &'a [Check],
    warnings: &'a [String],
    data: &'a T,
}

fn write_json<T: Serialize>(
    cfg: &ExperimentConfig,
    command: &str,
    name: &str,
    out: &mut Outcome<T>,
) -> Result<()> {
    let doc = Document {
        command,
        versions: io::versions(),
        config: cfg,
        pass: out.pass(),
        checks: &out.checks,
        warnings: &out.warnings,
        data: &out.data,
    };
    let path = cfg.out_dir.join(name);
    io::write_atomic(
        &path,
        (serde_json::to_string_pretty(&doc)? + "\n").as_bytes(),
    )?;
    out.files.push(path);
    Ok(())
}

fn write_text(
    cfg: &ExperimentConfig,
    name: &str,
    text: &str,
    files: &mut Vec<PathBuf>,
) -> Result<()> {
    let path = cfg.out_dir.join(name);
    io::write_atomic(&path, text.as_bytes())?;
    files.push(path);
    Ok(())
}

fn family(cfg: &ExperimentConfig) -> Result<KernelFamily> {
    Ok(KernelFamily::with_node_count(
        cfg.alpha, cfg.i_lo, cfg.i_hi, cfg.n_u,
    )?)
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Data of `kernel-report`.
#[derive(Debug, Clone, Serialize)]
pub struct KernelReportData {
    /// Checks at `w = 0`.
    pub report: KernelConditionReport,
    /// Per-condition verdict at `w = 0`.
    pub verdict: ConditionVerdict,
    /// Completeness proxy at `w ∈ {0, σ², -σ², iσ²}`.
    pub theta_sweep: Vec<ThetaProbe>,
    /// `sup_u ‖φ_u‖₁ = Φ_{I_lo}(0)`.
    pub l1_norm_sup: f64,
}

/// Kernel-condition report.
pub fn cmd_kernel_report(cfg: &ExperimentConfig) -> Result<Outcome<KernelReportData>> {
    cfg.validate()?;
    let fam = family(cfg)?;
    let tol = cfg.thresholds.kernel;
    let report = fam.verify_conditions(cfg.sigma, cfg.n_t, Complex64::new(0.0, 0.0), &tol)?;
    let verdict = report.verdict(&tol);
    let s2 = cfg.sigma * cfg.sigma;
    let ws = [
        Complex64::new(0.0, 0.0),
        Complex64::new(s2, 0.0),
        Complex64::new(-s2, 0.0),
        Complex64::new(0.0, s2),
    ];
    let theta_sweep = fam.theta_sweep(cfg.sigma, cfg.n_t, &ws, &tol)?;
    let mut checks = vec![
        Check::new(
            "beta_decay",
            report.beta_c,
            "finite sup (1+x^4)|phi_u(x)|",
            verdict.beta,
        ),
        Check::new(
            "gamma_lipschitz",
            report.gamma_l,
            "finite L1 Lipschitz constant",
            verdict.gamma,
        ),
        Check::new(
            "zeta_even_real",
            f64::from(u8::from(report.is_even_real)),
            "kernels real and even",
            verdict.zeta,
        ),
        Check::new(
            "eta_nonvanishing",
            report.eta_min,
            format!("min_t max_u |Phi_u(t)| > {}", tol.eta_floor),
            verdict.eta,
        ),
    ];
    for p in &theta_sweep {
        checks.push(Check::new(
            format!("theta_probe_w=({},{})", p.w_re, p.w_im),
            p.probe_rel,
            format!("probe Gram eigenvalue ratio > {}", tol.theta_probe_floor),
            p.passes(&tol),
        ));
    }
    let mut out = Outcome {
        data: KernelReportData {
            report,
            verdict,
            theta_sweep,
            l1_norm_sup: fam.l1_norm(cfg.i_lo)?,
        },
        checks,
        warnings: Vec::new(),
        files: Vec::new(),
    };
    write_json(cfg, "kernel-report", "kernel_report.json", &mut out)?;
    Ok(out)
}

/// One row of the dichotomy sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyRow {
    /// Jitter amplitude.
    pub amplitude: f64,
    /// Window half-width.
    pub window_r: f64,
    /// Number of points.
    pub points: usize,
    /// Lower frame-bound estimate.
    pub a_hat: f64,
    /// Upper frame-bound estimate.
    pub b_hat: f64,
    /// `A_hat / B_hat`.
    pub ratio: f64,
    /// `B_hat / A_hat`, empty when `A_hat` is near zero.
    pub condition_number: Option<f64>,
    /// `A_hat` below the near-zero threshold.
    pub near_zero: bool,
    /// Distance to the nearest arithmetic progression.
    pub progression_distance: f64,
    /// Density of that progression.
    pub best_a: f64,
    /// Offset of that progression.
    pub best_b: f64,
    /// Largest gap including window edges.
    pub max_gap: f64,
    /// Smallest adjacent difference.
    pub separation: f64,
}

/// Data of `dichotomy`.
#[derive(Debug, Clone, Serialize)]
pub struct DichotomyData {
    /// Sweep rows, window-major.
    pub rows: Vec<DichotomyRow>,
    /// Per window: amplitudes sorted by increasing `A_hat`.
    pub a_hat_order: Vec<Vec<f64>>,
    /// Per window: whether `A_hat` is nondecreasing in the amplitude.
    pub a_hat_monotone: Vec<bool>,
}

fn dichotomy_row(
    cfg: &ExperimentConfig,
    fam: &KernelFamily,
    amplitude: f64,
    r: f64,
) -> Result<DichotomyRow> {
    let set = SamplingSet::jittered(1.0, &cfg.jitter_for(amplitude), (-r, r))?;
    let grid = SpectrumGrid::periodic(cfg.sigma, 2.0 * r)?;
    let op = SamplingOperator::assemble(&set, fam, grid)?;
    let FrameReport {
        a_hat,
        b_hat,
        condition_number,
        ..
    } = op.frame_bounds()?;
    let near_zero = a_hat <= cfg.thresholds.near_zero * b_hat;
    let fit = set.progression_distance(cfg.progression_a_range, &cfg.progression_grid)?;
    Ok(DichotomyRow {
        amplitude,
        window_r: r,
        points: set.len(),
        a_hat,
        b_hat,
        ratio: a_hat / b_hat,
        condition_number: if near_zero {
            None
        } else {
            finite(condition_number)
        },
        near_zero,
        progression_distance: fit.dist,
        best_a: fit.a,
        best_b: fit.b,
        max_gap: set.max_gap(),
        separation: set.separation()?,
    })
}

/// Frame bounds against jitter amplitude at windows `R` and `2R`.
pub fn cmd_dichotomy(cfg: &ExperimentConfig) -> Result<Outcome<DichotomyData>> {
    cfg.validate()?;
    let fam = family(cfg)?;
    let header = io::comment_header("dichotomy", cfg)?;
    let windows = [cfg.window_r, 2.0 * cfg.window_r];
    let mut rows = Vec::new();
    let mut files = Vec::new();
    for &r in &windows {
        for &amp in &cfg.amplitudes {
            match dichotomy_row(cfg, &fam, amp, r) {
                Ok(row) => rows.push(row),
                Err(e) => {
                    let flagged = format!("{header}# status: aborted: {e}\n");
                    write_text(
                        cfg,
                        "dichotomy.csv",
                        &io::csv_document(&flagged, &rows)?,
                        &mut files,
                    )?;
                    return Err(e);
                }
            }
        }
    }
    write_text(
        cfg,
        "dichotomy.csv",
        &io::csv_document(&header, &rows)?,
        &mut files,
    )?;

    let t = &cfg.thresholds;
    let mut checks = Vec::new();
    let mut order = Vec::new();
    let mut monotone = Vec::new();
    for &r in &windows {
        let w: Vec<&DichotomyRow> = rows.iter().filter(|x| x.window_r == r).collect();
        let base = w
            .iter()
            .min_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
            .expect("nonempty sweep");
        let top = w
            .iter()
            .max_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
            .expect("nonempty sweep");
        if base.amplitude == 0.0 {
            checks.push(Check::new(
                format!("arithmetic_ratio_R={r}"),
                base.ratio,
                format!("A_hat/B_hat <= {}", t.arithmetic_ratio_max),
                base.ratio <= t.arithmetic_ratio_max,
            ));
        }
        checks.push(Check::new(
            format!("dichotomy_gain_R={r}"),
            top.ratio / base.ratio,
            format!(
                "ratio(amplitude {}) >= {} x ratio(amplitude {})",
                top.amplitude, t.dichotomy_gain, base.amplitude
            ),
            top.ratio >= t.dichotomy_gain * base.ratio,
        ));
        let mut sorted = w.clone();
        sorted.sort_by(|a, b| a.a_hat.total_cmp(&b.a_hat));
        order.push(sorted.iter().map(|x| x.amplitude).collect::<Vec<_>>());
        let mut by_amp = w.clone();
        by_amp.sort_by(|a, b| a.amplitude.total_cmp(&b.amplitude));
        monotone.push(by_amp.windows(2).all(|p| p[1].a_hat >= p[0].a_hat));
    }
    let same = order.windows(2).all(|p| p[0] == p[1]);
    checks.push(Check::new(
        "ordering_identical_R_2R",
        f64::from(u8::from(same)),
        "A_hat ordering across amplitudes identical at R and 2R",
        same,
    ));
    let mut out = Outcome {
        data: DichotomyData {
            rows,
            a_hat_order: order,
            a_hat_monotone: monotone,
        },
        checks,
        warnings: Vec::new(),
        files,
    };
    write_json(cfg, "dichotomy", "dichotomy.json", &mut out)?;
    Ok(out)
}

/// One row of the gap-decay sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    /// Gap parameter; the removed interval has length `4ρ`.
    pub rho: f64,
    /// Window half-width used.
    pub window_r: f64,
    /// Number of points.
    pub points: usize,
    /// Largest gap.
    pub max_gap: f64,
    /// `max |(f_ρ ∗ φ_u)(λ)|`.
    pub max_sample: f64,
}

/// Data of `gap-decay`.
#[derive(Debug, Clone, Serialize)]
pub struct GapDecayData {
    /// Gap centre `x_ρ`.
    pub centre: f64,
    /// Sup norm of `f_ρ` by refined grid search.
    pub sup_norm: f64,
    /// Sweep rows.
    pub rows: Vec<GapRow>,
    /// `max_sample(2ρ) / max_sample(ρ)` for consecutive doublings.
    pub doubling_factors: Vec<f64>,
    /// Log-log fit of `max_sample` against `ρ`.
    pub fit: LogLogFit,
}

/// Gap centre: a half-integer, so the sinc does not vanish on `Z`.
pub const GAP_CENTRE: f64 = 0.5;

/// Decay of `f_ρ = sinc(σ(x - x_ρ))` samples when `Λ ⊂ Z` has a gap of
/// length `4ρ` around `x_ρ`.
pub fn cmd_gap_decay(cfg: &ExperimentConfig) -> Result<Outcome<GapDecayData>> {
    cfg.validate()?;
    let fam = family(cfg)?;
    let x0 = GAP_CENTRE;
    let f = ClosedForm::Sinc {
        sigma: cfg.sigma,
        x0,
    };
    let mut rows = Vec::new();
    for &rho in &cfg.rhos {
        let r = cfg.window_r.max(4.0 * rho + 8.0);
        let set = SamplingSet::arithmetic(1.0, 0.0, (-r, r))?
            .without_interval(x0 - 2.0 * rho, x0 + 2.0 * rho)?;
        rows.push(GapRow {
            rho,
            window_r: r,
            points: set.len(),
            max_gap: set.max_gap(),
            max_sample: annihilation_test(&fam, &f, &set)?,
        });
    }
    let grid_f = BandlimitedFn::sinc(SpectrumGrid::new(cfg.sigma, cfg.n_spectrum)?, x0);
    let sup_norm = grid_f.sup_norm_refined((x0 - 4.0, x0 + 4.0), cfg.sup_points_per_unit)?;
    let xs: Vec<f64> = rows.iter().map(|r| r.rho).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.max_sample).collect();
    let fit = loglog_fit(&xs, &ys)?;
    let mut doubling = Vec::new();
    for p in rows.windows(2) {
        if p[1].rho == 2.0 * p[0].rho {
            doubling.push(p[1].max_sample / p[0].max_sample);
        }
    }

    let t = &cfg.thresholds;
    let mut checks = vec![
        Check::new(
            "slope",
            fit.slope,
            format!("-1 +/- {}", t.slope_tol),
            (fit.slope + 1.0).abs() <= t.slope_tol,
        ),
        Check::new(
            "sup_norm",
            sup_norm,
            "1 within 1e-6",
            (sup_norm - 1.0).abs() <= 1e-6,
        ),
    ];
    for (k, d) in doubling.iter().enumerate() {
        checks.push(Check::new(
            format!("doubling_{k}"),
            *d,
            format!("0.5 within {}%", 100.0 * t.halving_tol),
            (d / 0.5 - 1.0).abs() <= t.halving_tol,
        ));
    }
    let header = io::comment_header("gap-decay", cfg)?;
    let mut files = Vec::new();
    write_text(
        cfg,
        "gap_decay.csv",
        &io::csv_document(&header, &rows)?,
        &mut files,
    )?;
    let mut out = Outcome {
        data: GapDecayData {
            centre: x0,
            sup_norm,
            rows,
            doubling_factors: doubling,
            fit,
        },
        checks,
        warnings: Vec::new(),
        files,
    };
    write_json(cfg, "gap-decay", "gap_decay.json", &mut out)?;
    Ok(out)
}

/// One row of the ε sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsRow {
    /// Witness parameter; 0 marks the exact-lattice control.
    pub epsilon: f64,
    /// Window half-width `1/ε²`.
    pub window_r: f64,
    /// Number of points.
    pub points: usize,
    /// `max |(f ∗ φ_u)(λ)|` for the witness (the sine for the control).
    pub max_sample: f64,
    /// Sup norm of the grid witness; 1 for the control.
    pub witness_sup: f64,
}

/// Data of `eps-scaling`.
#[derive(Debug, Clone, Serialize)]
pub struct EpsScalingData {
    /// Sweep rows, control last.
    pub rows: Vec<EpsRow>,
    /// Log-log fit over the positive ε.
    pub fit: LogLogFit,
}

/// Witness `sin(πx)·sinc(εx)` on perturbed integers with `|λ_k - k| ≤ ε`
/// and `R = 1/ε²`.
pub fn cmd_eps_scaling(cfg: &ExperimentConfig) -> Result<Outcome<EpsScalingData>> {
    cfg.validate()?;
    let fam = family(cfg)?;
    let mut rows = Vec::new();
    for &eps in &cfg.epsilons {
        let r = 1.0 / (eps * eps);
        let set = SamplingSet::jittered(1.0, &cfg.jitter_for(eps), (-r, r))?;
        let witness = ClosedForm::witness(eps)?;
        let grid_w = near_null_witness_with_len(eps, cfg.n_spectrum)?;
        rows.push(EpsRow {
            epsilon: eps,
            window_r: r,
            points: set.len(),
            max_sample: annihilation_test(&fam, &witness, &set)?,
            witness_sup: grid_w.sup_norm_refined((-2.0, 2.0), cfg.sup_points_per_unit)?,
        });
    }
    let r_max = rows.iter().map(|r| r.window_r).fold(0.0, f64::max);
    let lattice = SamplingSet::arithmetic(1.0, 0.0, (-r_max, r_max))?;
    let control = annihilation_test(&fam, &ClosedForm::Sine { omega: PI }, &lattice)?;

    let xs: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.max_sample).collect();
    let fit = loglog_fit(&xs, &ys)?;
    let t = &cfg.thresholds;
    let mut checks = vec![
        Check::new(
            "slope",
            fit.slope,
            format!("1 +/- {}", t.slope_tol),
            (fit.slope - 1.0).abs() <= t.slope_tol,
        ),
        Check::new(
            "control_eps=0",
            control,
            format!("<= {}", t.annihilation_max),
            control <= t.annihilation_max,
        ),
    ];
    for row in &rows {
        checks.push(Check::new(
            format!("witness_sup_eps={}", row.epsilon),
            row.witness_sup,
            format!("1 within {}%", 100.0 * t.witness_sup_tol),
            (row.witness_sup - 1.0).abs() <= t.witness_sup_tol,
        ));
    }
    rows.push(EpsRow {
        epsilon: 0.0,
        window_r: r_max,
        points: lattice.len(),
        max_sample: control,
        witness_sup: 1.0,
    });
    let header = io::comment_header("eps-scaling", cfg)?;
    let mut files = Vec::new();
    write_text(
        cfg,
        "eps_scaling.csv",
        &io::csv_document(&header, &rows)?,
        &mut files,
    )?;
    let mut out = Outcome {
        data: EpsScalingData { rows, fit },
        checks,
        warnings: Vec::new(),
        files,
    };
    write_json(cfg, "eps-scaling", "eps_scaling.json", &mut out)?;
    Ok(out)
}

/// Data of `reconstruct`.
#[derive(Debug, Clone, Serialize)]
pub struct ReconstructData {
    /// Where the ground truth came from.
    pub signal: String,
    /// Number of sampling points.
    pub points: usize,
    /// Nodes of the reconstruction grid.
    pub grid_len: usize,
    /// Band edge of the reconstruction grid.
    pub recon_sigma: f64,
    /// Lower frame bound of the reconstruction operator.
    pub a_hat: f64,
    /// Upper frame bound.
    pub b_hat: f64,
    /// `B_hat/A_hat`; empty when `A_hat` is near zero.
    pub condition_number: Option<f64>,
    /// Tikhonov weight used.
    pub regularization: f64,
    /// `‖f_rec - f‖₂ / ‖f‖₂` on the signal grid.
    pub relative_l2_error: f64,
    /// Final augmented residual.
    pub residual_norm: f64,
    /// CG iterations.
    pub iterations: usize,
    /// CG met its tolerance.
    pub converged: bool,
    /// Requested relative noise level.
    pub noise_level: f64,
    /// Realised `‖noise‖ / ‖samples‖`.
    pub noise_relative: f64,
}

/// Assemble, sample, optionally add noise and reconstruct by CGLS.
///
/// `input` replaces the built-in test signal by a spectrum CSV. With
/// `export_operator` the operator header and entries are written as well.
pub fn cmd_reconstruct(
    cfg: &ExperimentConfig,
    input: Option<&Path>,
    export_operator: bool,
) -> Result<Outcome<ReconstructData>> {
    cfg.validate()?;
    let fam = family(cfg)?;
    let r = cfg.window_r;
    let set = SamplingSet::jittered(1.0, &cfg.jitter_for(cfg.jitter_amplitude), (-r, r))?;
    let grid = SpectrumGrid::periodic(cfg.sigma, 2.0 * r)?;
    let (truth, signal) = match input {
        Some(path) => {
            let f = io::read_spectrum_csv(path)?;
            if f.sigma() > cfg.sigma * (1.0 + 1e-12) {
                return Err(CliError::Config(format!(
                    "input band {} exceeds sigma = {}",
                    f.sigma(),
                    cfg.sigma
                )));
            }
            (f.resampled(grid), format!("file:{}", path.display()))
        }
        None => match cfg.signal {
            TestSignal::Sinc => (
                BandlimitedFn::sinc(grid, cfg.signal_x0),
                format!("sinc(x0={})", cfg.signal_x0),
            ),
            TestSignal::Zero => (BandlimitedFn::zero(grid), "zero".to_string()),
        },
    };
    let sample_op = SamplingOperator::assemble(&set, &fam, grid)?;
    let mut samples = sample_op.apply(&truth)?;

    let energy: f64 = samples.iter().map(|s| s.norm_sqr()).sum();
    let mut noise_energy = 0.0;
    if cfg.noise_level > 0.0 && energy > 0.0 {
        let scale = cfg.noise_level * (energy / samples.len() as f64).sqrt() / 2f64.sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for s in samples.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let n = Complex64::new(re, im) * scale;
            noise_energy += n.norm_sqr();
            *s += n;
        }
    }
    let noise_relative = if energy > 0.0 {
        (noise_energy / energy).sqrt()
    } else {
        0.0
    };

    let recon_grid = match cfg.recon_sigma {
        Some(rs) if rs < cfg.sigma => {
            // Same spacing as the signal grid, so the nodes coincide.
            let h = grid.step();
            let n = (rs / h + 1e-9).floor() as usize;
            SpectrumGrid::new(n as f64 * h, 2 * n + 1)?
        }
        _ => grid,
    };
    let op = if recon_grid == grid {
        sample_op.clone()
    } else {
        SamplingOperator::assemble(&set, &fam, recon_grid)?
    };
    let frame = op.frame_bounds()?;
    let near_zero = frame.a_hat <= cfg.thresholds.near_zero * frame.b_hat;
    let params = ReconstructParams {
        regularization: Some(cfg.reg_factor * frame.b_hat),
        tol: cfg.cg_tol,
        max_iter: cfg.max_iter,
    };
    let res = op.reconstruct(&samples, &params, None)?;
    let recovered = if recon_grid == grid {
        res.recovered.clone()
    } else {
        res.recovered.resampled(grid)
    };
    let diff = recovered.combine(Complex64::new(1.0, 0.0), &truth, Complex64::new(-1.0, 0.0))?;
    let relative_l2_error = if truth.l2_norm() > 0.0 {
        diff.l2_norm() / truth.l2_norm()
    } else {
        diff.l2_norm()
    };

    let mut warnings = Vec::new();
    let mut checks = Vec::new();
    if near_zero {
        warnings.push(UNSTABLE.to_string());
    } else if cfg.noise_level == 0.0 {
        let lim = cfg.thresholds.recon_error_max;
        checks.push(Check::new(
            "relative_l2_error",
            relative_l2_error,
            format!("< {lim}"),
            relative_l2_error < lim,
        ));
    } else {
        let lim = cfg.thresholds.noise_gain_max * cfg.noise_level;
        checks.push(Check::new(
            "relative_l2_error",
            relative_l2_error,
            format!("<= {} x noise level", cfg.thresholds.noise_gain_max),
            relative_l2_error <= lim,
        ));
    }
    if !res.converged {
        warnings.push(format!(
            "CG stopped at max_iter = {} before reaching cg_tol",
            cfg.max_iter
        ));
    }

    let header = io::comment_header("reconstruct", cfg)?;
    let mut files = Vec::new();
    write_text(
        cfg,
        "recovered_spectrum.csv",
        &io::spectrum_csv(&header, &res.recovered)?,
        &mut files,
    )?;
    write_text(
        cfg,
        "samples.csv",
        &io::samples_csv(&header, op.rows(), &samples)?,
        &mut files,
    )?;
    write_text(
        cfg,
        "points.csv",
        &io::points_csv(&header, &set),
        &mut files,
    )?;
    if export_operator {
        write_text(
            cfg,
            "operator.json",
            &io::operator_json(cfg, &op)?,
            &mut files,
        )?;
        write_text(
            cfg,
            "operator_matrix.csv",
            &io::operator_matrix_csv(&header, &op)?,
            &mut files,
        )?;
    }
    let mut out = Outcome {
        data: ReconstructData {
            signal,
            points: set.len(),
            grid_len: recon_grid.len(),
            recon_sigma: recon_grid.sigma(),
            a_hat: frame.a_hat,
            b_hat: frame.b_hat,
            condition_number: if near_zero {
                None
            } else {
                finite(frame.condition_number)
            },
            regularization: res.regularization,
            relative_l2_error,
            residual_norm: res.residual_norm,
            iterations: res.iterations,
            converged: res.converged,
            noise_level: cfg.noise_level,
            noise_relative,
        },
        checks,
        warnings,
        files,
    };
    write_json(cfg, "reconstruct", "reconstruct.json", &mut out)?;
    Ok(out)
}
