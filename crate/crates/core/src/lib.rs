//! Space–time (dynamical) sampling of bandlimited signals.
//!
//! A signal `f` with spectrum supported in `[-σ, σ]` is observed only through
//! the evolved states `f ∗ φ_u` of a fractional-diffusion kernel
//! `φ_u(x) = exp(-u|x|^α)`, sampled at the points of a discrete set `Λ` and
//! at every parameter `u` of an interval `I`. This crate provides
//!
//! * [`kernels`]: the kernel family, its Fourier transform and numerical
//!   checks of the regularity conditions the theory needs,
//! * [`bandlimited`]: spectrum-grid and closed-form bandlimited signals,
//! * [`sampling_sets`]: point sets with separation, gap and
//!   progression-distance diagnostics,
//! * [`operator`]: the discretised sampling operator, frame-bound estimates,
//!   annihilation tests and regularized reconstruction.
//!
//! Fourier convention everywhere: `F(t) = ∫ e^{-itx} f(x) dx`, inverse with
//! a `1/(2π)` factor.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bandlimited;
mod error;
pub mod kernels;
pub mod operator;
pub mod quadrature;
pub mod sampling_sets;

pub use bandlimited::{BandlimitedFn, ClosedForm, ParityParts, Signal, SpectrumGrid};
pub use error::{Error, Result};
pub use kernels::{KernelConditionReport, KernelFamily, ThetaProbe, Tolerances};
pub use num_complex::Complex64;
pub use operator::{FrameReport, ReconstructParams, ReconstructionResult, SamplingOperator};
pub use sampling_sets::{Jitter, SamplingSet};

/// Crate version, embedded in experiment outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
