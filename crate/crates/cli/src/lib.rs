//! Batch CLI over `ns-spectra-core`: experiment runs, plot-ready CSV/JSON,
//! and manifests that make every output reproducible byte for byte.

mod args;
mod commands;
mod config;
mod error;
mod manifest;
mod pool;
mod render;

use clap::Parser;

use args::{Cli, Command};
use commands::{FitConfig, MinItersConfig, MpDensityConfig, SpectrumConfig};
use config::{load_config_file, resolve_sweep_config, SweepOverrides};
use error::CliResult;
use ns_spectra_core::NsCoefficients;
use pool::resolve_threads;

/// Parses arguments, dispatches, and maps failures to exit codes
/// (0 ok, 2 usage, 3 I/O, 4 numeric).
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::MpDensity {
            gamma,
            sigma_bar,
            points,
            out,
        } => commands::cmd_mp_density(
            MpDensityConfig {
                gamma,
                sigma_bar,
                points,
            },
            &out,
        ),
        Command::Spectrum {
            in_d,
            out_d,
            trials,
            seed,
            iters,
            coeffs,
            threshold,
            full_trace,
            threads,
            out,
        } => {
            let k = coeffs.unwrap_or_default();
            commands::cmd_spectrum(
                SpectrumConfig {
                    in_d,
                    out_d: out_d.unwrap_or(in_d),
                    trials,
                    seed,
                    iterations: iters,
                    coefficients: [k.a, k.b, k.c],
                    tail_threshold: threshold,
                    full_trace,
                },
                resolve_threads(threads),
                &out,
            )
        }
        Command::Sweep {
            config,
            sizes,
            gamma,
            trials,
            iters,
            coeffs,
            threshold,
            seed,
            threads,
            out,
        } => {
            let file = config.map(|p| load_config_file(&p)).transpose()?;
            let resolved = resolve_sweep_config(
                file,
                &SweepOverrides {
                    sizes,
                    gamma,
                    trials,
                    iters,
                    coeffs,
                    threshold,
                    seed,
                },
            )?;
            commands::cmd_sweep(resolved, resolve_threads(threads), &out)
        }
        Command::MinIters {
            config,
            sizes,
            gamma,
            coeffs,
            epsilon,
            quantile,
            seed,
            max_iters,
            threads,
            out,
        } => {
            let file = config
                .map(|p| load_config_file(&p))
                .transpose()?
                .unwrap_or_default();
            let k: NsCoefficients = coeffs
                .or_else(|| {
                    file.coefficients
                        .as_ref()
                        .and_then(|list| list.first())
                        .map(|[a, b, c]| NsCoefficients { a: *a, b: *b, c: *c })
                })
                .unwrap_or_default();
            commands::cmd_min_iters(
                MinItersConfig {
                    sizes: sizes
                        .or(file.sizes)
                        .unwrap_or_else(|| vec![64, 128, 256, 512, 1024]),
                    gamma: gamma.or(file.gamma).unwrap_or(1.0),
                    coefficients: [k.a, k.b, k.c],
                    epsilon,
                    quantile,
                    seed: seed.or(file.master_seed).unwrap_or(42),
                    max_iters,
                },
                resolve_threads(threads),
                &out,
            )
        }
        Command::Fit {
            input,
            x,
            y,
            iteration,
            out,
        } => commands::cmd_fit(
            FitConfig {
                input,
                x,
                y,
                iteration,
            },
            out.as_deref(),
        ),
    }
}
