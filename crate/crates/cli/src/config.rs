//! The sweep configuration file: a JSON document mirroring the sweep flags.
//! Flags override file values; defaults fill whatever is left. The resolved
//! form (every field present) is what manifests embed, so a manifest's
//! `config` block can be fed straight back through `--config`.

use std::fs;
use std::path::Path;

use ns_spectra_core::{NsCoefficients, NsSchedule, SweepConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials_per_size: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<[f64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
}

/// Flag-level overrides collected from the command line.
#[derive(Debug, Clone, Default)]
pub struct SweepOverrides {
    pub sizes: Option<Vec<usize>>,
    pub gamma: Option<f64>,
    pub trials: Option<u32>,
    pub iters: Option<u32>,
    pub coeffs: Option<NsCoefficients>,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
}

pub fn load_config_file(path: &Path) -> CliResult<SweepConfigFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: invalid config: {e}", path.display())))
}

/// Merges flags over file values over defaults into a validated core config.
pub fn resolve_sweep_config(
    file: Option<SweepConfigFile>,
    overrides: &SweepOverrides,
) -> CliResult<SweepConfig> {
    let file = file.unwrap_or_default();
    let defaults = SweepConfig::default();

    let iterations = overrides
        .iters
        .or(file.iterations)
        .unwrap_or(defaults.schedule.iterations() as u32);
    if iterations == 0 {
        return Err(CliError::Usage(
            "iterations: a sweep needs at least one iteration".into(),
        ));
    }
    let coefficients: Vec<NsCoefficients> = match (overrides.coeffs, &file.coefficients) {
        (Some(k), _) => vec![k],
        (None, Some(list)) => {
            if list.is_empty() {
                return Err(CliError::Usage("coefficients: list must be non-empty".into()));
            }
            list.iter()
                .map(|[a, b, c]| NsCoefficients::new(*a, *b, *c))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Usage(format!("coefficients: {e}")))?
        }
        (None, None) => defaults.schedule.coefficients().to_vec(),
    };
    let schedule = NsSchedule::new(coefficients, iterations as usize)
        .map_err(|e| CliError::Usage(format!("coefficients: {e}")))?;

    let config = SweepConfig {
        sizes: overrides
            .sizes
            .clone()
            .or(file.sizes)
            .unwrap_or(defaults.sizes),
        gamma: overrides.gamma.or(file.gamma).unwrap_or(defaults.gamma),
        trials_per_size: overrides
            .trials
            .or(file.trials_per_size)
            .unwrap_or(defaults.trials_per_size),
        schedule,
        tail_threshold: overrides
            .threshold
            .or(file.tail_threshold)
            .unwrap_or(defaults.tail_threshold),
        master_seed: overrides
            .seed
            .or(file.master_seed)
            .unwrap_or(defaults.master_seed),
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

/// The fully resolved file-schema view of a config, for manifests.
pub fn resolved_file_view(config: &SweepConfig) -> SweepConfigFile {
    SweepConfigFile {
        sizes: Some(config.sizes.clone()),
        gamma: Some(config.gamma),
        trials_per_size: Some(config.trials_per_size),
        iterations: Some(config.schedule.iterations() as u32),
        coefficients: Some(
            config
                .schedule
                .coefficients()
                .iter()
                .map(|k| [k.a, k.b, k.c])
                .collect(),
        ),
        tail_threshold: Some(config.tail_threshold),
        master_seed: Some(config.master_seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_everything() {
        let config = resolve_sweep_config(None, &SweepOverrides::default()).unwrap();
        assert_eq!(config, SweepConfig::default());
    }

    #[test]
    fn flags_override_file() {
        let file = SweepConfigFile {
            sizes: Some(vec![16, 32]),
            master_seed: Some(7),
            ..Default::default()
        };
        let overrides = SweepOverrides {
            seed: Some(99),
            ..Default::default()
        };
        let config = resolve_sweep_config(Some(file), &overrides).unwrap();
        assert_eq!(config.sizes, vec![16, 32]);
        assert_eq!(config.master_seed, 99);
    }

    #[test]
    fn resolved_view_round_trips() {
        let config = resolve_sweep_config(None, &SweepOverrides::default()).unwrap();
        let view = resolved_file_view(&config);
        let text = crate::render::to_json(&view);
        let reloaded: SweepConfigFile = serde_json::from_str(&text).unwrap();
        let config2 = resolve_sweep_config(Some(reloaded), &SweepOverrides::default()).unwrap();
        assert_eq!(config, config2);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = serde_json::from_str::<SweepConfigFile>("{\"sizs\": [8]}");
        assert!(err.is_err());
    }
}
