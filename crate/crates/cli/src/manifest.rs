use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 of the package name, version and output format revision.
pub fn version_hash() -> String {
    let digest = Sha256::digest(format!("jpsn-cli {VERSION} format 1").as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Record of one run. No timestamps, so reruns write identical bytes.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub version_hash: String,
    pub seed: u64,
    pub config: &'a RunConfig,
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
}

pub fn manifest_name(command: &str) -> String {
    format!("manifest-{command}.json")
}

pub fn write_manifest(
    dir: &Path,
    command: &str,
    config: &RunConfig,
    outputs: Vec<String>,
    notes: Vec<String>,
) -> CliResult<String> {
    let manifest = Manifest {
        command,
        version: VERSION,
        version_hash: version_hash(),
        seed: config.chain.seed,
        config,
        outputs,
        notes,
    };
    let name = manifest_name(command);
    let path = dir.join(&name);
    let mut text = serde_json::to_string_pretty(&manifest).expect("serializable");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(name)
}
