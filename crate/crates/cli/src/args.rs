//! Command-line surface.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use ns_spectra_core::NsCoefficients;

fn parse_coeffs(raw: &str) -> Result<NsCoefficients, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected a,b,c (three comma-separated reals), got {raw:?}"));
    }
    let mut vals = [0.0f64; 3];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("{part:?}: {e}"))?;
    }
    NsCoefficients::new(vals[0], vals[1], vals[2]).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "ns-spectra",
    version,
    about = "Newton-Schulz spectrum experiments: density curves, sweeps, and scaling fits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the Marchenko-Pastur density into a CSV (`s,rho`)
    MpDensity {
        /// Aspect ratio out_d/in_d, in (0, 1]
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Scale parameter of the law
        #[arg(long, default_value_t = 1.0)]
        sigma_bar: f64,
        /// Sample count, uniform over [0, upper_edge * 1.05]
        #[arg(long, default_value_t = 512)]
        points: usize,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Full spectra before/after the iteration, CSV (`size,trial,iteration,sval_index,sval`)
    Spectrum {
        /// Row count of the generated matrices
        #[arg(long)]
        in_d: usize,
        /// Column count; defaults to in_d (square)
        #[arg(long)]
        out_d: Option<usize>,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Newton-Schulz iterations; 0 records only the normalized input
        #[arg(long, default_value_t = 5)]
        iters: u32,
        /// Polynomial coefficients as a,b,c
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: Option<NsCoefficients>,
        /// Tail threshold recorded in the trace
        #[arg(long, default_value_t = 0.6)]
        threshold: f64,
        /// Emit every intermediate iteration, not just first and last
        #[arg(long)]
        full_trace: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Size sweep: per-iteration CSV plus a JSON summary with the fitted slope
    Sweep {
        /// JSON config file; flags override its values
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated in_d values, strictly increasing
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Trials per size
        #[arg(long)]
        trials: Option<u32>,
        /// Newton-Schulz iterations
        #[arg(long)]
        iters: Option<u32>,
        /// Polynomial coefficients as a,b,c
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: Option<NsCoefficients>,
        /// Tail threshold
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Output CSV path; the summary lands next to it as *.summary.json
        #[arg(long)]
        out: PathBuf,
    },
    /// Smallest iteration count per size that pulls the spectrum into a band around 1
    MinIters {
        /// JSON config file (sizes, gamma, coefficients, master_seed)
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Polynomial coefficients as a,b,c
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: Option<NsCoefficients>,
        /// Band half-width: the target is [1-epsilon, 1+epsilon]
        #[arg(long, default_value_t = 0.3)]
        epsilon: f64,
        /// Fraction of singular values that must sit inside the band
        #[arg(long, default_value_t = 0.99)]
        quantile: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 16)]
        max_iters: u32,
        #[arg(long)]
        threads: Option<usize>,
        /// Output JSON path
        #[arg(long)]
        out: PathBuf,
    },
    /// Refit a power law over columns of an existing sweep CSV
    Fit {
        /// Sweep CSV to read
        #[arg(long)]
        input: PathBuf,
        /// Column for x (e.g. size)
        #[arg(long)]
        x: String,
        /// Column for y (e.g. median_sval)
        #[arg(long)]
        y: String,
        /// Iteration to select before grouping (when the CSV has one)
        #[arg(long, default_value_t = 0)]
        iteration: u32,
        /// Output JSON path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
