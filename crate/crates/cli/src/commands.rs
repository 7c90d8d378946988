//! The five subcommands: `mp-density`, `spectrum`, `sweep`, `min-iters`,
//! and `fit`.

use std::fs;
use std::path::{Path, PathBuf};

use ns_spectra_core::{
    derive_trial_seed, fit_power_law, generate, median_sval_per_size, min_iterations_for_band,
    mp_density, normalize_frobenius, ns_run, run_trial, singular_values, GaussianSpec,
    MinIterations, MpParams, NsCoefficients, NsSchedule, Shape, Spectrum, SweepConfig,
    SweepResult, TrialRecord,
};
use serde::Serialize;

use crate::config::{resolved_file_view, SweepConfigFile};
use crate::error::{CliError, CliResult};
use crate::manifest::write_manifest;
use crate::pool::run_indexed;
use crate::render::{fmt_f64, sibling, to_json, write_atomic};

// ---------------------------------------------------------------------------
// mp-density

#[derive(Debug, Serialize)]
pub struct MpDensityConfig {
    pub gamma: f64,
    pub sigma_bar: f64,
    pub points: usize,
}

/// CSV `s,rho` sampled uniformly over `[0, upper_edge * 1.05]`.
///
/// The `rho` column is the density of the singular-value *magnitudes*
/// (twice the signed density), so the emitted curve integrates to 1 over
/// the grid and overlays a singular-value histogram directly.
pub fn cmd_mp_density(cfg: MpDensityConfig, out: &Path) -> CliResult<()> {
    if cfg.points < 2 {
        return Err(CliError::Usage(format!(
            "points: need at least 2, got {}",
            cfg.points
        )));
    }
    let params = MpParams::new(cfg.gamma, cfg.sigma_bar)?;
    let hi = params.upper_edge() * 1.05;
    let mut csv = String::from("s,rho\n");
    for i in 0..cfg.points {
        let s = hi * i as f64 / (cfg.points - 1) as f64;
        csv.push_str(&fmt_f64(s));
        csv.push(',');
        csv.push_str(&fmt_f64(2.0 * mp_density(s, &params)));
        csv.push('\n');
    }
    write_atomic(out, csv.as_bytes())?;
    write_manifest("mp-density", cfg, None, out, &[(out, csv.as_bytes())])
}

// ---------------------------------------------------------------------------
// spectrum

#[derive(Debug, Serialize)]
pub struct SpectrumConfig {
    pub in_d: usize,
    pub out_d: usize,
    pub trials: u32,
    pub seed: u64,
    pub iterations: u32,
    pub coefficients: [f64; 3],
    pub tail_threshold: f64,
    pub full_trace: bool,
}

/// CSV `size,trial,iteration,sval_index,sval` with the full spectrum at
/// iteration 0 and at the final iteration (all iterations with
/// `full_trace`). Indices follow the descending spectrum order.
pub fn cmd_spectrum(cfg: SpectrumConfig, threads: usize, out: &Path) -> CliResult<()> {
    let shape = Shape::new(cfg.in_d, cfg.out_d)?;
    if cfg.trials == 0 {
        return Err(CliError::Usage("trials: need at least 1".into()));
    }
    let [a, b, c] = cfg.coefficients;
    let k = NsCoefficients::new(a, b, c)?;

    let per_trial: Vec<ns_spectra_core::Result<Vec<(usize, Spectrum)>>> =
        run_indexed(cfg.trials as usize, threads, |trial| {
            let seed = derive_trial_seed(cfg.seed, 0, trial as u32);
            let g = generate(&GaussianSpec::standard(shape, seed));
            if cfg.iterations == 0 {
                let normalized = normalize_frobenius(&g)?;
                return Ok(vec![(0, singular_values(&normalized)?)]);
            }
            let schedule = NsSchedule::uniform(k, cfg.iterations as usize)?;
            let (_, trace) = ns_run(&g, &schedule, cfg.tail_threshold)?;
            let keep: Vec<(usize, Spectrum)> = trace
                .records()
                .iter()
                .filter(|r| {
                    cfg.full_trace || r.iteration == 0 || r.iteration == cfg.iterations as usize
                })
                .map(|r| (r.iteration, r.spectrum.clone()))
                .collect();
            Ok(keep)
        });

    let mut csv = String::from("size,trial,iteration,sval_index,sval\n");
    for (trial, result) in per_trial.into_iter().enumerate() {
        for (iteration, spectrum) in result? {
            for (idx, value) in spectrum.values().iter().enumerate() {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    cfg.in_d,
                    trial,
                    iteration,
                    idx,
                    fmt_f64(*value)
                ));
            }
        }
    }
    write_atomic(out, csv.as_bytes())?;
    let seed = cfg.seed;
    write_manifest("spectrum", cfg, Some(seed), out, &[(out, csv.as_bytes())])
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Debug, Serialize)]
struct SweepSummary {
    config: SweepConfigFile,
    per_size: Vec<SizeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<FitSummary>,
}

#[derive(Debug, Serialize)]
struct SizeSummary {
    in_d: usize,
    trials: u32,
    mean_final_tail_fraction: f64,
    std_final_tail_fraction: f64,
    mean_final_ortho_residual: f64,
    std_final_ortho_residual: f64,
    mean_initial_median_sval: f64,
    std_initial_median_sval: f64,
    mean_initial_min_sval: f64,
    mean_initial_max_sval: f64,
    pooled_initial_median_sval: f64,
}

#[derive(Debug, Serialize)]
struct FitSummary {
    x: &'static str,
    y: &'static str,
    slope: f64,
    intercept: f64,
    r_squared: f64,
    points_used: usize,
}

/// Runs the sweep across a worker pool and writes the per-iteration CSV,
/// the JSON summary (aggregates plus the power-law fit of the pooled
/// pre-iteration medians), and the manifest covering both.
pub fn cmd_sweep(config: SweepConfig, threads: usize, out: &Path) -> CliResult<()> {
    config.validate()?;
    let cells = config.cells();
    let trials: Vec<ns_spectra_core::Result<TrialRecord>> =
        run_indexed(cells.len(), threads, |i| {
            let (size_index, trial_index) = cells[i];
            run_trial(&config, size_index, trial_index)
        });
    let trials: Vec<TrialRecord> = trials.into_iter().collect::<Result<_, _>>()?;
    let result = SweepResult::assemble(config.clone(), trials)?;

    let csv = sweep_csv(&result);
    write_atomic(out, csv.as_bytes())?;

    let summary = to_json(&sweep_summary(&result));
    let summary_path = sibling(out, "summary.json");
    write_atomic(&summary_path, summary.as_bytes())?;

    write_manifest(
        "sweep",
        resolved_file_view(&config),
        Some(config.master_seed),
        out,
        &[
            (out, csv.as_bytes()),
            (&summary_path, summary.as_bytes()),
        ],
    )
}

fn sweep_csv(result: &SweepResult) -> String {
    let mut csv =
        String::from("size,trial,iteration,tail_fraction,ortho_residual,median_sval,min_sval,max_sval\n");
    for trial in result.trials() {
        for step in &trial.steps {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                trial.in_d,
                trial.trial_index,
                step.iteration,
                fmt_f64(step.tail_fraction),
                fmt_f64(step.ortho_residual),
                fmt_f64(step.median_sval),
                fmt_f64(step.min_sval),
                fmt_f64(step.max_sval)
            ));
        }
    }
    csv
}

fn sweep_summary(result: &SweepResult) -> SweepSummary {
    let per_size = result
        .per_size()
        .iter()
        .map(|a| SizeSummary {
            in_d: a.in_d,
            trials: a.trials,
            mean_final_tail_fraction: a.mean_final_tail_fraction,
            std_final_tail_fraction: a.std_final_tail_fraction,
            mean_final_ortho_residual: a.mean_final_ortho_residual,
            std_final_ortho_residual: a.std_final_ortho_residual,
            mean_initial_median_sval: a.mean_initial_median_sval,
            std_initial_median_sval: a.std_initial_median_sval,
            mean_initial_min_sval: a.mean_initial_min_sval,
            mean_initial_max_sval: a.mean_initial_max_sval,
            pooled_initial_median_sval: a.pooled_initial_median_sval,
        })
        .collect();
    let points: Vec<(f64, f64)> = median_sval_per_size(result)
        .into_iter()
        .map(|(n, m)| (n as f64, m))
        .collect();
    let fit = fit_power_law(&points).ok().map(|f| FitSummary {
        x: "in_d",
        y: "pooled_initial_median_sval",
        slope: f.slope,
        intercept: f.intercept,
        r_squared: f.r_squared,
        points_used: f.points_used,
    });
    SweepSummary {
        config: resolved_file_view(result.config()),
        per_size,
        fit,
    }
}

// ---------------------------------------------------------------------------
// min-iters

#[derive(Debug, Serialize)]
pub struct MinItersConfig {
    pub sizes: Vec<usize>,
    pub gamma: f64,
    pub coefficients: [f64; 3],
    pub epsilon: f64,
    pub quantile: f64,
    pub seed: u64,
    pub max_iters: u32,
}

#[derive(Debug, Serialize)]
struct MinItersRow {
    in_d: usize,
    min_iterations: serde_json::Value,
}

/// JSON array of `{in_d, min_iterations | "saturated"}`, one entry per size.
pub fn cmd_min_iters(cfg: MinItersConfig, threads: usize, out: &Path) -> CliResult<()> {
    if cfg.sizes.is_empty() {
        return Err(CliError::Usage("sizes: need at least one size".into()));
    }
    let [a, b, c] = cfg.coefficients;
    let k = NsCoefficients::new(a, b, c)?;
    let outcomes: Vec<ns_spectra_core::Result<MinIterations>> =
        run_indexed(cfg.sizes.len(), threads, |i| {
            let in_d = cfg.sizes[i];
            let out_d = (cfg.gamma * in_d as f64).round() as usize;
            let shape = Shape::new(in_d, out_d)?;
            min_iterations_for_band(shape, k, cfg.epsilon, cfg.quantile, cfg.seed, cfg.max_iters)
        });
    let mut rows = Vec::with_capacity(cfg.sizes.len());
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let value = match outcome? {
            MinIterations::Reached(t) => serde_json::Value::from(t),
            MinIterations::Saturated => serde_json::Value::from("saturated"),
        };
        rows.push(MinItersRow {
            in_d: cfg.sizes[i],
            min_iterations: value,
        });
    }
    let json = to_json(&rows);
    write_atomic(out, json.as_bytes())?;
    let seed = cfg.seed;
    write_manifest("min-iters", cfg, Some(seed), out, &[(out, json.as_bytes())])
}

// ---------------------------------------------------------------------------
// fit

#[derive(Debug, Serialize)]
pub struct FitConfig {
    pub input: PathBuf,
    pub x: String,
    pub y: String,
    pub iteration: u32,
}

#[derive(Debug, Serialize)]
struct FitOutput {
    input: String,
    x: String,
    y: String,
    iteration: u32,
    slope: f64,
    intercept: f64,
    r_squared: f64,
    points_used: usize,
}

/// Re-fits a power law over columns of an existing sweep CSV. Rows are
/// filtered to the chosen iteration (when the CSV has an `iteration`
/// column), grouped by the x column, and the y values averaged per group
/// before fitting.
pub fn cmd_fit(cfg: FitConfig, out: Option<&Path>) -> CliResult<()> {
    let text = fs::read_to_string(&cfg.input).map_err(|e| CliError::io(&cfg.input, e))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Usage(format!("{}: empty CSV", cfg.input.display())))?;
    let columns: Vec<&str> = header.split(',').collect();
    let col = |name: &str| -> CliResult<usize> {
        columns.iter().position(|c| *c == name).ok_or_else(|| {
            CliError::Usage(format!(
                "{}: no column named {name} (have: {})",
                cfg.input.display(),
                header
            ))
        })
    };
    let x_col = col(&cfg.x)?;
    let y_col = col(&cfg.y)?;
    let iter_col = columns.iter().position(|c| *c == "iteration");

    // Group y values by the bit pattern of x so equal keys pool exactly.
    let mut groups: Vec<(u64, f64, Vec<f64>)> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |idx: usize| -> CliResult<f64> {
            fields
                .get(idx)
                .and_then(|f| f.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "{}: line {}: bad numeric field",
                        cfg.input.display(),
                        lineno + 2
                    ))
                })
        };
        if let Some(ic) = iter_col {
            if parse(ic)? != cfg.iteration as f64 {
                continue;
            }
        }
        let x = parse(x_col)?;
        let y = parse(y_col)?;
        match groups.iter_mut().find(|(key, _, _)| *key == x.to_bits()) {
            Some((_, _, ys)) => ys.push(y),
            None => groups.push((x.to_bits(), x, vec![y])),
        }
    }
    let points: Vec<(f64, f64)> = groups
        .iter()
        .map(|(_, x, ys)| (*x, ys.iter().sum::<f64>() / ys.len() as f64))
        .collect();
    let fit = fit_power_law(&points)?;

    let output = FitOutput {
        input: cfg.input.display().to_string(),
        x: cfg.x.clone(),
        y: cfg.y.clone(),
        iteration: cfg.iteration,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        points_used: fit.points_used,
    };
    let json = to_json(&output);
    match out {
        Some(path) => {
            write_atomic(path, json.as_bytes())?;
            write_manifest("fit", cfg, None, path, &[(path, json.as_bytes())])
        }
        None => {
            print!("{json}");
            Ok(())
        }
    }
}
