//! Core numerics for Newton-Schulz orthogonalization experiments.
//!
//! This crate provides everything needed to study how the singular-value
//! spectrum of a random matrix responds to the odd-polynomial iteration
//! `G' = aG + b(GG^T)G + c(GG^T)(GG^T)G`:
//!
//! - deterministic seeded Gaussian matrix generation ([`gaussian`]),
//! - dense kernels: multiplication, Frobenius norms, and an SVD with an
//!   explicit accuracy contract ([`linalg`]),
//! - the Newton-Schulz step, schedules, and per-iteration traces ([`ns`]),
//! - the Marchenko-Pastur singular-value law with CDF, quantiles, and
//!   Kolmogorov-Smirnov goodness of fit ([`mp`]),
//! - size sweeps, tail statistics, power-law fitting, and minimal-iteration
//!   search ([`sweep`], [`fit`]).
//!
//! The crate is `no_std` (with `alloc`); IO, CLI, and parallel scheduling
//! live in the companion `ns-spectra-cli` crate. Everything here is a pure
//! function of its inputs: the same seeds produce bit-identical results.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod fit;
pub mod gaussian;
pub mod linalg;
pub mod matrix;
pub mod mp;
pub mod ns;
pub mod rng;
pub mod sweep;

pub use error::Error;
pub use fit::{fit_power_law, FitResult};
pub use gaussian::{generate, GaussianSpec};
pub use linalg::{
    frobenius_norm, matmul, normalize_frobenius, orthogonality_residual, singular_values, svd,
    Spectrum, SvdResult,
};
pub use matrix::{DenseMatrix, Shape};
pub use mp::{ks_between, ks_statistic, mp_cdf, mp_density, mp_quantile, EmpiricalDistribution, MpParams};
pub use ns::{ns_run, ns_step, scalar_iterate, scalar_polynomial, IterationTrace, NsCoefficients, NsSchedule};
pub use rng::{derive_trial_seed, SplitMix64};
pub use sweep::{
    median_sval_per_size, min_iterations_for_band, min_iterations_for_matrix, run_sweep,
    run_trial, MinIterations, SizeAggregate, StepSummary, SweepConfig, SweepResult, TrialRecord,
};

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
