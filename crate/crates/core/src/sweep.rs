//! Size sweeps and the scaling-law statistics built on them.
//!
//! A sweep runs `trials_per_size` independent matrices at every size,
//! pushes each through the Newton-Schulz schedule, and keeps per-iteration
//! summaries plus the full pre-iteration spectrum (the slope fit and the
//! distribution comparisons pool those). Each `(size, trial)` cell derives
//! its own seed from the master seed, so the result is a pure function of
//! the config no matter how the trials are scheduled; a parallel runner
//! just maps [`run_trial`] over the cells and hands them to
//! [`SweepResult::assemble`].

use alloc::format;
use alloc::vec::Vec;

use crate::gaussian::{generate, GaussianSpec};
use crate::linalg::{gram_left, normalize_frobenius, spectrum_from_gram, Spectrum};
use crate::matrix::{DenseMatrix, Shape};
use crate::ns::{ns_run, ns_step, NsCoefficients, NsSchedule};
use crate::rng::derive_trial_seed;
use crate::{Error, Result};

/// Full description of a sweep. Defaults mirror the desk-scale experiment:
/// square matrices from 64 to 1024, 32 trials each, five iterations of the
/// default coefficients, tail threshold 0.6.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub gamma: f64,
    pub trials_per_size: u32,
    pub schedule: NsSchedule,
    pub tail_threshold: f64,
    pub master_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            sizes: alloc::vec![64, 128, 256, 512, 1024],
            gamma: 1.0,
            trials_per_size: 32,
            schedule: NsSchedule::default(),
            tail_threshold: 0.6,
            master_seed: 42,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::Config("sizes must be non-empty".into()));
        }
        for w in self.sizes.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config(format!(
                    "sizes must be strictly increasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        for &s in &self.sizes {
            if s < 8 {
                return Err(Error::Config(format!("sizes must be at least 8, got {s}")));
            }
            if self.out_d_for(s) == 0 {
                return Err(Error::Config(format!(
                    "gamma {} rounds size {s} to zero columns",
                    self.gamma
                )));
            }
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Config(format!(
                "gamma must be in (0, 1], got {}",
                self.gamma
            )));
        }
        if self.trials_per_size == 0 {
            return Err(Error::Config("trials_per_size must be at least 1".into()));
        }
        if !(self.tail_threshold > 0.0 && self.tail_threshold < 1.0) {
            return Err(Error::Config(format!(
                "tail threshold must be in (0, 1), got {}",
                self.tail_threshold
            )));
        }
        Ok(())
    }

    /// Column count for a given row count: `round(gamma * in_d)`.
    pub fn out_d_for(&self, in_d: usize) -> usize {
        libm::round(self.gamma * in_d as f64) as usize
    }

    /// All `(size_index, trial_index)` cells in result order.
    pub fn cells(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::with_capacity(self.sizes.len() * self.trials_per_size as usize);
        for size_index in 0..self.sizes.len() {
            for trial_index in 0..self.trials_per_size {
                out.push((size_index, trial_index));
            }
        }
        out
    }
}

/// Metrics of one iterate within one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSummary {
    pub iteration: usize,
    pub tail_fraction: f64,
    pub ortho_residual: f64,
    pub median_sval: f64,
    pub min_sval: f64,
    pub max_sval: f64,
}

/// One `(size, trial)` cell: the full pre-iteration spectrum plus summary
/// metrics for every step (step 0 is the normalized input).
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub size_index: usize,
    pub trial_index: u32,
    pub in_d: usize,
    pub out_d: usize,
    pub seed: u64,
    pub initial_spectrum: Spectrum,
    pub steps: Vec<StepSummary>,
}

/// Per-size means and population standard deviations, plus the pooled
/// pre-iteration median the slope fit consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeAggregate {
    pub in_d: usize,
    pub trials: u32,
    pub mean_final_tail_fraction: f64,
    pub std_final_tail_fraction: f64,
    pub mean_final_ortho_residual: f64,
    pub std_final_ortho_residual: f64,
    pub mean_initial_median_sval: f64,
    pub std_initial_median_sval: f64,
    pub mean_initial_min_sval: f64,
    pub mean_initial_max_sval: f64,
    pub pooled_initial_median_sval: f64,
}

/// Everything a sweep produced, with trials in `(size, trial)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    config: SweepConfig,
    trials: Vec<TrialRecord>,
    per_size: Vec<SizeAggregate>,
}

impl SweepResult {
    /// Orders the cells, checks that every `(size, trial)` pair is present
    /// exactly once, and computes the per-size aggregates.
    pub fn assemble(config: SweepConfig, mut trials: Vec<TrialRecord>) -> Result<Self> {
        config.validate()?;
        trials.sort_by_key(|t| (t.size_index, t.trial_index));
        let expected = config.sizes.len() * config.trials_per_size as usize;
        if trials.len() != expected {
            return Err(Error::Config(format!(
                "sweep produced {} cells, expected {expected}",
                trials.len()
            )));
        }
        for (i, t) in trials.iter().enumerate() {
            let want_size = i / config.trials_per_size as usize;
            let want_trial = (i % config.trials_per_size as usize) as u32;
            if t.size_index != want_size || t.trial_index != want_trial {
                return Err(Error::Config(format!(
                    "missing or duplicated cell: expected (size {want_size}, trial {want_trial}), \
                     found (size {}, trial {})",
                    t.size_index, t.trial_index
                )));
            }
        }
        let per_size = compute_aggregates(&config, &trials);
        Ok(Self {
            config,
            trials,
            per_size,
        })
    }

    pub fn config(&self) -> &SweepConfig {
        &self.config
    }

    pub fn trials(&self) -> &[TrialRecord] {
        &self.trials
    }

    pub fn per_size(&self) -> &[SizeAggregate] {
        &self.per_size
    }

    /// Recomputes the aggregates from the cells; equality with
    /// [`SweepResult::per_size`] is an invariant the tests check.
    pub fn recompute_aggregates(&self) -> Vec<SizeAggregate> {
        compute_aggregates(&self.config, &self.trials)
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var))
}

fn pooled_median(spectra: &[&Spectrum]) -> f64 {
    let mut pool: Vec<f64> = spectra
        .iter()
        .flat_map(|s| s.values().iter().copied())
        .collect();
    pool.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = pool.len();
    if n % 2 == 1 {
        pool[n / 2]
    } else {
        0.5 * (pool[n / 2 - 1] + pool[n / 2])
    }
}

fn compute_aggregates(config: &SweepConfig, trials: &[TrialRecord]) -> Vec<SizeAggregate> {
    let mut out = Vec::with_capacity(config.sizes.len());
    for (size_index, &in_d) in config.sizes.iter().enumerate() {
        let cells: Vec<&TrialRecord> = trials
            .iter()
            .filter(|t| t.size_index == size_index)
            .collect();
        let finals: Vec<&StepSummary> = cells.iter().map(|t| t.steps.last().unwrap()).collect();
        let tails: Vec<f64> = finals.iter().map(|s| s.tail_fraction).collect();
        let residuals: Vec<f64> = finals.iter().map(|s| s.ortho_residual).collect();
        let initial_medians: Vec<f64> = cells.iter().map(|t| t.steps[0].median_sval).collect();
        let initial_mins: Vec<f64> = cells.iter().map(|t| t.steps[0].min_sval).collect();
        let initial_maxs: Vec<f64> = cells.iter().map(|t| t.steps[0].max_sval).collect();
        let spectra: Vec<&Spectrum> = cells.iter().map(|t| &t.initial_spectrum).collect();
        let (mean_tail, std_tail) = mean_std(&tails);
        let (mean_res, std_res) = mean_std(&residuals);
        let (mean_med, std_med) = mean_std(&initial_medians);
        let (mean_min, _) = mean_std(&initial_mins);
        let (mean_max, _) = mean_std(&initial_maxs);
        out.push(SizeAggregate {
            in_d,
            trials: cells.len() as u32,
            mean_final_tail_fraction: mean_tail,
            std_final_tail_fraction: std_tail,
            mean_final_ortho_residual: mean_res,
            std_final_ortho_residual: std_res,
            mean_initial_median_sval: mean_med,
            std_initial_median_sval: std_med,
            mean_initial_min_sval: mean_min,
            mean_initial_max_sval: mean_max,
            pooled_initial_median_sval: pooled_median(&spectra),
        });
    }
    out
}

/// Runs one `(size, trial)` cell: derive the seed, generate, normalize,
/// iterate, summarize. Pure; safe to call from any thread in any order.
pub fn run_trial(config: &SweepConfig, size_index: usize, trial_index: u32) -> Result<TrialRecord> {
    let in_d = *config
        .sizes
        .get(size_index)
        .ok_or_else(|| Error::Config(format!("size index {size_index} out of range")))?;
    let out_d = config.out_d_for(in_d);
    let seed = derive_trial_seed(config.master_seed, size_index as u32, trial_index);
    let shape = Shape::new(in_d, out_d)?;
    let g = generate(&GaussianSpec::standard(shape, seed));
    let (_, trace) = ns_run(&g, &config.schedule, config.tail_threshold)?;
    let steps = trace
        .records()
        .iter()
        .map(|r| StepSummary {
            iteration: r.iteration,
            tail_fraction: r.tail_fraction,
            ortho_residual: r.ortho_residual,
            median_sval: r.spectrum.median(),
            min_sval: r.min_sval,
            max_sval: r.max_sval,
        })
        .collect();
    Ok(TrialRecord {
        size_index,
        trial_index,
        in_d,
        out_d,
        seed,
        initial_spectrum: trace.records()[0].spectrum.clone(),
        steps,
    })
}

/// Runs every cell serially. A deterministic function of the config; a
/// parallel runner that assembles the same cells gets an equal result.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut trials = Vec::with_capacity(config.sizes.len() * config.trials_per_size as usize);
    for (size_index, trial_index) in config.cells() {
        trials.push(run_trial(config, size_index, trial_index)?);
    }
    SweepResult::assemble(config.clone(), trials)
}

/// Per size, the median of the pooled pre-iteration singular values across
/// all trials. This is the statistic whose size dependence the slope fit
/// measures.
pub fn median_sval_per_size(result: &SweepResult) -> Vec<(usize, f64)> {
    result
        .config()
        .sizes
        .iter()
        .enumerate()
        .map(|(size_index, &in_d)| {
            let spectra: Vec<&Spectrum> = result
                .trials()
                .iter()
                .filter(|t| t.size_index == size_index)
                .map(|t| &t.initial_spectrum)
                .collect();
            (in_d, pooled_median(&spectra))
        })
        .collect()
}

/// Outcome of the minimal-iteration search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinIterations {
    /// Smallest iteration count at which the band condition held.
    Reached(u32),
    /// The condition never held within the iteration budget.
    Saturated,
}

impl MinIterations {
    pub fn as_option(&self) -> Option<u32> {
        match self {
            MinIterations::Reached(t) => Some(*t),
            MinIterations::Saturated => None,
        }
    }
}

/// Trials averaged inside [`min_iterations_for_band`]. Fixed so results are
/// comparable across sizes and runs.
pub const BAND_SEARCH_TRIALS: u32 = 4;

fn validate_band(band_epsilon: f64, quantile: f64) -> Result<()> {
    if !(band_epsilon > 0.0 && band_epsilon < 1.0) {
        return Err(Error::Config(format!(
            "band epsilon must be in (0, 1), got {band_epsilon}"
        )));
    }
    if !(quantile > 0.0 && quantile <= 1.0) {
        return Err(Error::Config(format!(
            "quantile must be in (0, 1], got {quantile}"
        )));
    }
    Ok(())
}

/// Smallest `t <= max_iters` such that, after Frobenius normalization and
/// `t` steps of `k`, at least `quantile` of this matrix's singular values
/// lie within `[1 - band_epsilon, 1 + band_epsilon]`.
pub fn min_iterations_for_matrix(
    g: &DenseMatrix,
    k: NsCoefficients,
    band_epsilon: f64,
    quantile: f64,
    max_iters: u32,
) -> Result<MinIterations> {
    validate_band(band_epsilon, quantile)?;
    let mut cur = normalize_frobenius(g)?;
    for t in 0..=max_iters {
        if t > 0 {
            cur = ns_step(&cur, k)?;
        }
        let spectrum = spectrum_from_gram(&gram_left(&cur))?;
        if spectrum.band_fraction(1.0 - band_epsilon, 1.0 + band_epsilon) >= quantile {
            return Ok(MinIterations::Reached(t));
        }
    }
    Ok(MinIterations::Saturated)
}

/// Smallest `t <= max_iters` such that the in-band fraction of singular
/// values, averaged over [`BAND_SEARCH_TRIALS`] seeded matrices of the given
/// shape, reaches `quantile` after `t` iterations of `k`.
pub fn min_iterations_for_band(
    size: Shape,
    k: NsCoefficients,
    band_epsilon: f64,
    quantile: f64,
    master_seed: u64,
    max_iters: u32,
) -> Result<MinIterations> {
    validate_band(band_epsilon, quantile)?;
    let mut iterates: Vec<DenseMatrix> = (0..BAND_SEARCH_TRIALS)
        .map(|trial| {
            let seed = derive_trial_seed(master_seed, 0, trial);
            normalize_frobenius(&generate(&GaussianSpec::standard(size, seed)))
        })
        .collect::<Result<_>>()?;
    for t in 0..=max_iters {
        if t > 0 {
            for m in iterates.iter_mut() {
                *m = ns_step(m, k)?;
            }
        }
        let mut mean_fraction = 0.0;
        for m in &iterates {
            let spectrum = spectrum_from_gram(&gram_left(m))?;
            mean_fraction += spectrum.band_fraction(1.0 - band_epsilon, 1.0 + band_epsilon);
        }
        mean_fraction /= iterates.len() as f64;
        if mean_fraction >= quantile {
            return Ok(MinIterations::Reached(t));
        }
    }
    Ok(MinIterations::Saturated)
}
