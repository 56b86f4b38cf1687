//! Run manifests and the CSV and JSON files stamped with them.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: Option<String>,
    pub outputs: Vec<String>,
    pub seed: u64,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: Option<&Path>, seed: u64) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config: config.map(|p| p.display().to_string()),
            outputs: Vec::new(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    fn header_lines(&self) -> Vec<String> {
        vec![
            format!("# horolab {}", self.tool_version),
            format!("# subcommand: {}", self.subcommand),
            format!("# config: {}", self.config.as_deref().unwrap_or("-")),
            format!("# outputs: {}", self.outputs.join(" ")),
            format!("# seed: {}", self.seed),
        ]
    }
}

/// Rows of a CSV file, already formatted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip form, always with a decimal point or exponent.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// What a subcommand produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    /// Printed to stdout.
    pub lines: Vec<String>,
    pub table: Table,
    pub summary: Value,
    pub passed: bool,
}

/// Writes `<dir>/<subcommand>.csv` and `<dir>/<subcommand>.json`; returns
/// their paths.
pub fn write_outputs(
    dir: &Path,
    manifest: &mut RunManifest,
    report: &Report,
) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{}.csv", manifest.subcommand));
    let json_path = dir.join(format!("{}.json", manifest.subcommand));
    manifest.outputs = vec![
        csv_path.display().to_string(),
        json_path.display().to_string(),
    ];

    let mut file = File::create(&csv_path)?;
    for line in manifest.header_lines() {
        writeln!(file, "{line}")?;
    }
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(&report.table.header)?;
    for row in &report.table.rows {
        writer.write_record(row)?;
    }
    writer.flush()?;

    let doc = json!({ "manifest": manifest, "passed": report.passed, "summary": report.summary });
    let mut text = serde_json::to_string_pretty(&doc).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(&json_path, text)?;
    Ok(vec![csv_path, json_path])
}
