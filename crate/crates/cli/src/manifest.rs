//! Run manifest written next to every output file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// SHA-256 of each input file, keyed by the path as given.
    pub inputs: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub format: String,
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunManifest {
    pub fn new(
        command: &str,
        inputs: &[PathBuf],
        parameters: BTreeMap<String, Value>,
        seed: Option<u64>,
        format: &str,
    ) -> CliResult<Self> {
        let inputs = inputs
            .iter()
            .map(|p| Ok((p.display().to_string(), sha256_file(p)?)))
            .collect::<CliResult<_>>()?;
        Ok(Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs,
            parameters,
            seed,
            format: format.to_string(),
        })
    }

    /// `<out>.manifest.json`
    pub fn path_for(out: &Path) -> PathBuf {
        let mut name = out.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write_for(&self, out: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(Self::path_for(out), text)?;
        Ok(())
    }
}
