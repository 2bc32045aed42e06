//! CSV rendering and the per-run manifest sidecar.

use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

/// Shortest decimal that round-trips to the same f64, so re-parsing a CSV
/// or a manifest echo reproduces the value bit for bit.
pub fn float_field(x: f64) -> String {
    format!("{x:?}")
}

/// Header plus rows, comma-separated, LF line endings, trailing newline.
pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Reproducibility sidecar written next to every output file. The
/// parameter echo holds the fully resolved values in the same syntax the
/// flags accept, so feeding them back reproduces the run byte for byte.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub parameters: BTreeMap<String, String>,
    pub master_seed: Option<u64>,
    pub outputs: Vec<String>,
    /// Stationary variance backing the H_c column, when one exists.
    pub k0: Option<f64>,
    pub h_gibbs_non_monotone: Option<bool>,
    pub h_conditional_non_monotone: Option<bool>,
}

impl RunManifest {
    pub fn new(subcommand: &'static str) -> Self {
        Self {
            tool: "entroflow",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            parameters: BTreeMap::new(),
            master_seed: None,
            outputs: Vec::new(),
            k0: None,
            h_gibbs_non_monotone: None,
            h_conditional_non_monotone: None,
        }
    }

    pub fn param(&mut self, key: &str, value: String) -> &mut Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn param_float(&mut self, key: &str, value: f64) -> &mut Self {
        self.param(key, float_field(value))
    }

    /// Serializes next to `out_path` as `<out_path>.manifest.json`.
    pub fn write_beside(&self, out_path: &str) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(manifest_path(out_path), text + "\n")
    }
}

pub fn manifest_path(out_path: &str) -> String {
    format!("{out_path}.manifest.json")
}

pub fn write_text(path: &str, content: &str) -> std::io::Result<()> {
    if let Some(dir) = Path::new(path).parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, content)
}
