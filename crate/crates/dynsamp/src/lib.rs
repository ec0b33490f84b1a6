//! Experiment harness for space-time sampling of bandlimited signals by a
//! family of exponential convolution kernels.
//!
//! The numerics live in `dynsamp-core`; this crate adds configuration,
//! file formats and the pipelines run by the `dynsamp` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod io;

pub use config::{ExperimentConfig, JitterModel, TestSignal, Thresholds, OUT_ENV};
pub use error::{CliError, Result};
pub use experiments::{
    cmd_dichotomy, cmd_eps_scaling, cmd_gap_decay, cmd_kernel_report, cmd_reconstruct, Check,
    Outcome,
};
