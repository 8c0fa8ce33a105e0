use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::Context;
use sha2::{Digest, Sha256};

/// What a command produced: the primary table in both formats plus any side files.
pub struct Report {
    pub csv: String,
    pub json: serde_json::Value,
    /// `(file name suffix, contents)`, written next to the primary output.
    pub extra: Vec<(String, String)>,
    pub seeds: Vec<u64>,
    /// Reported after the output is written.
    pub failure: Option<crate::Failure>,
}

impl Report {
    pub fn new(csv: String, json: serde_json::Value) -> Self {
        Self {
            csv,
            json,
            extra: Vec::new(),
            seeds: Vec::new(),
            failure: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Csv => report.csv.clone(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("json renders");
            s.push('\n');
            s
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[derive(serde::Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(serde::Serialize)]
pub struct Manifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seeds: Vec<u64>,
    pub versions: serde_json::Value,
    pub wall_time_seconds: f64,
    pub outputs: Vec<OutputDigest>,
}

impl Manifest {
    pub fn new(
        command: &str,
        parameters: serde_json::Value,
        seeds: Vec<u64>,
        elapsed: Duration,
    ) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            seeds,
            versions: serde_json::json!({
                "polylim-cli": env!("CARGO_PKG_VERSION"),
                "polylim-core": polylim_core::VERSION,
            }),
            wall_time_seconds: elapsed.as_secs_f64(),
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, path: &Path, contents: &[u8]) {
        self.outputs.push(OutputDigest {
            path: path.display().to_string(),
            bytes: contents.len(),
            sha256: sha256_hex(contents),
        });
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        write_atomic(path, s.as_bytes())
    }
}

/// `<out>.manifest.json`
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// `<out>` with `suffix` appended to its file name.
pub fn side_path(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(suffix);
    out.with_file_name(name)
}

/// Seven significant digits, switching to exponent form for very small or large values.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&mag) {
        return format!("{x:.6e}");
    }
    format!("{x:.*}", (6 - mag).max(0) as usize)
}
