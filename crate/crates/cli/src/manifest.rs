//! Run manifests: one JSON document per command invocation recording the
//! tool version, the fully resolved configuration, the master seed, and a
//! SHA-256 checksum of every output file. Re-running with a manifest's
//! config reproduces the checksums (the timestamp is the one excluded
//! field).

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliResult;
use crate::render::{to_json, write_atomic};

#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub tool_version: String,
    pub command: String,
    pub config: C,
    pub master_seed: Option<u64>,
    pub timestamp_unix: u64,
    pub outputs: Vec<OutputChecksum>,
}

#[derive(Debug, Serialize)]
pub struct OutputChecksum {
    pub file: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Builds the manifest for `(file name, bytes)` pairs already written next
/// to `primary_out`, and writes it as `<stem>.manifest.json`.
pub fn write_manifest<C: Serialize>(
    command: &str,
    config: C,
    master_seed: Option<u64>,
    primary_out: &Path,
    outputs: &[(&Path, &[u8])],
) -> CliResult<()> {
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        config,
        master_seed,
        timestamp_unix: unix_now(),
        outputs: outputs
            .iter()
            .map(|(path, bytes)| OutputChecksum {
                file: path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                sha256: sha256_hex(bytes),
            })
            .collect(),
    };
    let manifest_path = crate::render::sibling(primary_out, "manifest.json");
    write_atomic(&manifest_path, to_json(&manifest).as_bytes())
}
