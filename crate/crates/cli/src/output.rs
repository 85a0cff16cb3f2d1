//! Artifact formatting and the run manifest.

use crate::error::CliError;
use chrono::{DateTime, SecondsFormat, Utc};
use serde_json::json;
use sha2::{Digest, Sha256};
use std::path::Path;

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Shortest round-trip decimal; infinities as `Inf`/`-Inf`.
pub fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "Inf".into()
    } else if x == f64::NEG_INFINITY {
        "-Inf".into()
    } else {
        format!("{x}")
    }
}

/// Inverse of [`fmt_f64`].
pub fn parse_f64(s: &str) -> Option<f64> {
    match s {
        "Inf" => Some(f64::INFINITY),
        "-Inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

pub fn fmt_time(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// One output file held in memory until the run completes.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: Vec<u8>,
}

impl Artifact {
    pub fn text(&self) -> &str {
        std::str::from_utf8(&self.contents).expect("artifacts are UTF-8")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub subcommand: &'static str,
    pub artifacts: Vec<Artifact>,
}

impl RunOutput {
    pub fn get(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }
}

/// Builds a CSV artifact row by row.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn finish(self, name: &str) -> Artifact {
        let contents = self.writer.into_inner().expect("in-memory flush");
        Artifact { name: name.to_string(), contents }
    }
}

pub fn json_artifact(name: &str, value: &serde_json::Value) -> Artifact {
    let mut contents = serde_json::to_vec_pretty(value).expect("serialisable");
    contents.push(b'\n');
    Artifact { name: name.to_string(), contents }
}

/// Manifest content: tool version, seed, input hashes and output hashes.
pub fn manifest(run: &RunOutput, seed: u64, inputs: &[(String, String)]) -> Artifact {
    let outputs: serde_json::Map<String, serde_json::Value> =
        run.artifacts.iter().map(|a| (a.name.clone(), json!(sha256_hex(&a.contents)))).collect();
    let inputs: serde_json::Map<String, serde_json::Value> =
        inputs.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json_artifact(
        "manifest.json",
        &json!({
            "tool": "satqkd",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": run.subcommand,
            "seed": seed,
            "inputs": inputs,
            "outputs": outputs,
        }),
    )
}

/// Write every artifact plus `manifest.json` into `dir`.
pub fn write_run(dir: &Path, run: &RunOutput, seed: u64, inputs: &[(String, String)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let manifest = manifest(run, seed, inputs);
    for a in run.artifacts.iter().chain(std::iter::once(&manifest)) {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.contents).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}
