use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dynsamp::{Check, ExperimentConfig, JitterModel, Outcome, TestSignal, OUT_ENV};

#[derive(Parser)]
#[command(name = "dynsamp", version, about = "Space-time sampling experiments")]
struct Cli {
    /// TOML configuration; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = OUT_ENV)]
    out: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Kernel exponent.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Lower end of the kernel parameter interval.
    #[arg(long, global = true, allow_negative_numbers = true)]
    i_lo: Option<f64>,
    /// Upper end of the kernel parameter interval.
    #[arg(long, global = true)]
    i_hi: Option<f64>,
    /// Band edge.
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Half-width of the sampling window.
    #[arg(long, global = true)]
    window_r: Option<f64>,
    /// Nodes of standalone spectra.
    #[arg(long, global = true)]
    n_spectrum: Option<usize>,
    /// Quadrature nodes on the kernel interval.
    #[arg(long, global = true)]
    n_u: Option<usize>,
    /// Frequency grid size of the kernel report.
    #[arg(long, global = true)]
    n_t: Option<usize>,
    /// Jitter model.
    #[arg(long, global = true)]
    jitter: Option<JitterModel>,
    /// Jitter amplitude for reconstruct.
    #[arg(long, global = true)]
    jitter_amplitude: Option<f64>,
    /// Seed for uniform jitter and noise.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated dichotomy amplitudes.
    #[arg(long, global = true, value_delimiter = ',')]
    amplitudes: Option<Vec<f64>>,
    /// Comma-separated gap half-widths.
    #[arg(long, global = true, value_delimiter = ',')]
    rhos: Option<Vec<f64>>,
    /// Comma-separated witness parameters.
    #[arg(long, global = true, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    /// Regularization relative to the upper frame bound.
    #[arg(long, global = true)]
    reg_factor: Option<f64>,
    /// CG iteration cap.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Relative noise level on the samples.
    #[arg(long, global = true)]
    noise_level: Option<f64>,
    /// Built-in test signal.
    #[arg(long, global = true)]
    signal: Option<TestSignal>,
    /// Centre of the sinc test signal.
    #[arg(long, global = true, allow_negative_numbers = true)]
    signal_x0: Option<f64>,
    /// Band edge used for reconstruction.
    #[arg(long, global = true)]
    recon_sigma: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the kernel family conditions.
    KernelReport,
    /// Frame bounds against jitter amplitude.
    Dichotomy,
    /// Sample decay around a growing gap in the integers.
    GapDecay,
    /// Sample size of the near-null witness against epsilon.
    EpsScaling,
    /// Reconstruct a signal from its space-time samples.
    Reconstruct {
        /// Spectrum CSV to use as the ground truth.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also write the operator header and matrix.
        #[arg(long)]
        export_operator: bool,
    },
}

macro_rules! apply {
    ($cfg:ident, $o:ident, $($f:ident),*) => {
        $(if let Some(v) = $o.$f.clone() { $cfg.$f = v; })*
    };
}

fn resolve(cli: &Cli) -> dynsamp::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_toml_file(p)?,
        None => ExperimentConfig::default(),
    };
    let o = &cli.overrides;
    apply!(
        cfg,
        o,
        alpha,
        i_lo,
        i_hi,
        sigma,
        window_r,
        n_spectrum,
        n_u,
        n_t,
        jitter,
        jitter_amplitude,
        seed,
        amplitudes,
        rhos,
        epsilons,
        reg_factor,
        max_iter,
        noise_level,
        signal,
        signal_x0
    );
    if o.recon_sigma.is_some() {
        cfg.recon_sigma = o.recon_sigma;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report<T>(out: &Outcome<T>) -> ExitCode {
    for Check {
        name,
        value,
        rule,
        pass,
    } in &out.checks
    {
        println!(
            "{} {name} = {value:e} ({rule})",
            if *pass { "PASS" } else { "FAIL" }
        );
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    if out.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn run(cli: &Cli) -> dynsamp::Result<ExitCode> {
    let cfg = resolve(cli)?;
    Ok(match &cli.command {
        Command::KernelReport => report(&dynsamp::cmd_kernel_report(&cfg)?),
        Command::Dichotomy => report(&dynsamp::cmd_dichotomy(&cfg)?),
        Command::GapDecay => report(&dynsamp::cmd_gap_decay(&cfg)?),
        Command::EpsScaling => report(&dynsamp::cmd_eps_scaling(&cfg)?),
        Command::Reconstruct {
            input,
            export_operator,
        } => report(&dynsamp::cmd_reconstruct(
            &cfg,
            input.as_deref(),
            *export_operator,
        )?),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
