//! Experiment configuration: defaults, TOML files and validation.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use dynsamp_core::{Jitter, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Environment variable that overrides the output directory.
pub const OUT_ENV: &str = "DYNSAMP_OUT";

/// Jitter family used by the sweeps; the amplitude comes from the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum JitterModel {
    /// `amplitude·(-1)^k`.
    Alternating,
    /// Seeded uniform draws in `[-amplitude, amplitude]`.
    Uniform,
}

/// Built-in test signal for `reconstruct`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TestSignal {
    /// `sin(σ(x - x0))/(σ(x - x0))`.
    Sinc,
    /// The zero function.
    Zero,
}

/// Pass/fail thresholds of the experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// `A_hat <= near_zero·B_hat` counts as zero.
    pub near_zero: f64,
    /// Largest `A_hat/B_hat` accepted for the unperturbed set.
    pub arithmetic_ratio_max: f64,
    /// Required gain of `A_hat/B_hat` from amplitude 0 to the largest one.
    pub dichotomy_gain: f64,
    /// Half-width of the accepted band around the expected slopes ±1.
    pub slope_tol: f64,
    /// Accepted deviation of the per-doubling decay factor from 1/2.
    pub halving_tol: f64,
    /// Accepted deviation of the witness sup norm from 1.
    pub witness_sup_tol: f64,
    /// Largest sample magnitude for exact annihilation.
    pub annihilation_max: f64,
    /// Largest noiseless relative reconstruction error.
    pub recon_error_max: f64,
    /// Largest ratio of noisy reconstruction error to the noise level.
    pub noise_gain_max: f64,
    /// Kernel-condition thresholds.
    pub kernel: Tolerances,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            near_zero: dynsamp_core::operator::NEAR_ZERO,
            arithmetic_ratio_max: 1e-6,
            dichotomy_gain: 100.0,
            slope_tol: 0.15,
            halving_tol: 0.25,
            witness_sup_tol: 0.02,
            annihilation_max: 1e-10,
            recon_error_max: 1e-3,
            noise_gain_max: 10.0,
            kernel: Tolerances::default(),
        }
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Kernel exponent `α`.
    pub alpha: f64,
    /// Lower end of the parameter interval `I`.
    pub i_lo: f64,
    /// Upper end of `I`.
    pub i_hi: f64,
    /// Band edge `σ`.
    pub sigma: f64,
    /// Half-width `R` of the sampling window.
    pub window_r: f64,
    /// Node count of standalone spectra (witness, imported signals).
    pub n_spectrum: usize,
    /// Gauss–Legendre nodes on `I`.
    pub n_u: usize,
    /// Frequency grid size for the kernel report.
    pub n_t: usize,
    /// Evaluation points per unit length for sup norms.
    pub sup_points_per_unit: f64,
    /// Jitter family.
    pub jitter: JitterModel,
    /// Jitter amplitude for `reconstruct`.
    pub jitter_amplitude: f64,
    /// Seed for uniform jitter and sample noise.
    pub seed: u64,
    /// Amplitudes of the dichotomy sweep.
    pub amplitudes: Vec<f64>,
    /// Gap half-widths `ρ` of the gap-decay sweep.
    pub rhos: Vec<f64>,
    /// Values of `ε` for the witness sweep.
    pub epsilons: Vec<f64>,
    /// Range of densities searched by the progression fit.
    pub progression_a_range: (f64, f64),
    /// Grid sizes of the progression search levels.
    pub progression_grid: Vec<usize>,
    /// Regularization relative to `B_hat`.
    pub reg_factor: f64,
    /// CG stopping tolerance.
    pub cg_tol: f64,
    /// CG iteration cap.
    pub max_iter: usize,
    /// Relative level of complex Gaussian noise added to the samples.
    pub noise_level: f64,
    /// Built-in test signal.
    pub signal: TestSignal,
    /// Centre of the sinc test signal.
    pub signal_x0: f64,
    /// Reconstruction band edge; `None` reconstructs on the signal band.
    pub recon_sigma: Option<f64>,
    /// Output directory.
    pub out_dir: PathBuf,
    /// Pass/fail thresholds.
    pub thresholds: Thresholds,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            i_lo: 0.5,
            i_hi: 2.0,
            sigma: PI,
            window_r: 25.0,
            n_spectrum: 1024,
            n_u: 32,
            n_t: 256,
            sup_points_per_unit: 64.0,
            jitter: JitterModel::Alternating,
            jitter_amplitude: 0.2,
            seed: 0,
            amplitudes: vec![0.0, 0.025, 0.05, 0.1, 0.2],
            rhos: vec![2.0, 4.0, 8.0, 16.0, 32.0],
            epsilons: vec![0.1, 0.05, 0.025, 0.0125],
            progression_a_range: (0.5, 2.0),
            progression_grid: vec![256, 32, 32],
            reg_factor: dynsamp_core::operator::DEFAULT_REG_FACTOR,
            cg_tol: 1e-12,
            max_iter: 5000,
            noise_level: 0.0,
            signal: TestSignal::Sinc,
            signal_x0: 0.5,
            recon_sigma: None,
            out_dir: PathBuf::from("out"),
            thresholds: Thresholds::default(),
        }
    }
}

impl ExperimentConfig {
    /// Reads a TOML file; missing keys keep their defaults.
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// Parses TOML text; missing keys keep their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Jitter of the given amplitude under the configured model.
    pub fn jitter_for(&self, amplitude: f64) -> Jitter {
        if amplitude == 0.0 {
            return Jitter::None;
        }
        match self.jitter {
            JitterModel::Alternating => Jitter::Alternating { amplitude },
            JitterModel::Uniform => Jitter::Uniform {
                amplitude,
                seed: self.seed,
            },
        }
    }

    /// Rejects configurations that violate a module precondition.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let finite = [
            ("alpha", self.alpha),
            ("i_lo", self.i_lo),
            ("i_hi", self.i_hi),
            ("sigma", self.sigma),
            ("window_r", self.window_r),
            ("reg_factor", self.reg_factor),
            ("noise_level", self.noise_level),
            ("signal_x0", self.signal_x0),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        if self.alpha <= 0.0 {
            return bad("alpha must be positive".into());
        }
        if self.i_lo <= 0.0 {
            return bad(format!("i_lo = {} must be positive", self.i_lo));
        }
        if self.i_hi <= self.i_lo {
            return bad("i_hi must exceed i_lo".into());
        }
        if self.sigma <= 0.0 {
            return bad("sigma must be positive".into());
        }
        if self.window_r <= 0.0 {
            return bad("window_r must be positive".into());
        }
        if self.n_spectrum < 16 {
            return bad("n_spectrum must be at least 16".into());
        }
        if self.n_u < 1 {
            return bad("n_u must be at least 1".into());
        }
        if self.n_t < 16 {
            return bad("n_t must be at least 16".into());
        }
        if !(self.sup_points_per_unit >= 8.0) {
            return bad("sup_points_per_unit must be at least 8".into());
        }
        if self.amplitudes.is_empty() || self.amplitudes.iter().any(|a| !(0.0..0.5).contains(a)) {
            return bad("amplitudes must be nonempty and lie in [0, 0.5)".into());
        }
        if !(0.0..0.5).contains(&self.jitter_amplitude) {
            return bad("jitter_amplitude must lie in [0, 0.5)".into());
        }
        if self.rhos.len() < 2 || self.rhos.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return bad("rhos needs at least two positive values".into());
        }
        if self.epsilons.len() < 2 || self.epsilons.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return bad("epsilons needs at least two values in (0, 1)".into());
        }
        let (a_lo, a_hi) = self.progression_a_range;
        if !(a_lo > 0.0 && a_hi >= a_lo && a_hi.is_finite()) {
            return bad("progression_a_range must satisfy 0 < lo <= hi".into());
        }
        if self.progression_grid.is_empty() || self.progression_grid.iter().any(|&n| n < 2) {
            return bad("progression_grid entries must be at least 2".into());
        }
        if self.reg_factor < 0.0 {
            return bad("reg_factor must be nonnegative".into());
        }
        if !(self.cg_tol > 0.0) || self.max_iter == 0 {
            return bad("cg_tol must be positive and max_iter nonzero".into());
        }
        if self.noise_level < 0.0 {
            return bad("noise_level must be nonnegative".into());
        }
        if let Some(rs) = self.recon_sigma {
            if !(rs > 0.0 && rs <= self.sigma) {
                return bad("recon_sigma must lie in (0, sigma]".into());
            }
        }
        let t = &self.thresholds;
        if [
            t.near_zero,
            t.slope_tol,
            t.halving_tol,
            t.witness_sup_tol,
            t.recon_error_max,
        ]
        .iter()
        .any(|v| !(*v > 0.0))
        {
            return bad("thresholds must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn toml_keeps_defaults_for_missing_keys() {
        let cfg = ExperimentConfig::from_toml_str(
            "alpha = 1.0\ni_lo = 1.0\ni_hi = 3.0\n[thresholds]\nslope_tol = 0.2\n",
        )
        .unwrap();
        assert_eq!(cfg.alpha, 1.0);
        assert_eq!(cfg.window_r, 25.0);
        assert_eq!(cfg.thresholds.slope_tol, 0.2);
        assert_eq!(cfg.thresholds.recon_error_max, 1e-3);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_toml_str("bogus = 1").is_err());
        let mut cfg = ExperimentConfig {
            i_lo: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        cfg.i_lo = 0.5;
        cfg.amplitudes = vec![0.6];
        assert!(cfg.validate().is_err());
        cfg.amplitudes = vec![0.1];
        cfg.recon_sigma = Some(4.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_amplitude_means_no_jitter() {
        let cfg = ExperimentConfig {
            jitter: JitterModel::Uniform,
            seed: 9,
            ..Default::default()
        };
        assert_eq!(cfg.jitter_for(0.0), Jitter::None);
        assert_eq!(
            cfg.jitter_for(0.1),
            Jitter::Uniform {
                amplitude: 0.1,
                seed: 9
            }
        );
    }
}
