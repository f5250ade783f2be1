use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use dbf_core::constructions::FunctionTableFile;
use dbf_core::search::SearchReport;
use dbf_core::{FunctionTable, PropertyReport};

use crate::manifest::RunManifest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    FunctionTable,
    CheckReport,
    DesignReport,
    Autocorrelation,
    SearchReport,
}

/// A function table file. Hand-written inputs may omit `kind` and `manifest`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableOutput {
    pub kind: OutputKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    #[serde(flatten)]
    pub table: FunctionTableFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedReport {
    pub check: String,
    /// element the check refers to, e.g. the fibre value b
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    pub report: PropertyReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl NamedReport {
    pub fn new(check: &str, report: PropertyReport) -> Self {
        NamedReport {
            check: check.to_string(),
            at: None,
            report,
            details: None,
        }
    }

    pub fn at(mut self, at: String) -> Self {
        self.at = Some(at);
        self
    }

    pub fn details(mut self, details: serde_json::Value) -> Self {
        self.details = Some(details);
        self
    }
}

/// Output of `check` and `design`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportOutput {
    pub kind: OutputKind,
    pub manifest: RunManifest,
    pub verdict: bool,
    pub reports: Vec<NamedReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutocorrEntry {
    pub tau: usize,
    /// N_c = |{i : s_{i+τ} - s_i ≡ c}| for c = 0..p
    pub counts: Vec<u64>,
    /// C(τ) when it is an integer
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutocorrOutput {
    pub kind: OutputKind,
    pub manifest: RunManifest,
    pub p: u32,
    pub period: usize,
    /// one digit per symbol
    pub sequence: String,
    pub ideal: PropertyReport,
    pub autocorrelation: Vec<AutocorrEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchOutput {
    pub kind: OutputKind,
    pub manifest: RunManifest,
    #[serde(flatten)]
    pub report: SearchReport,
}

pub fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn read_table(path: &Path) -> Result<FunctionTable> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: FunctionTableFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    FunctionTable::from_file(&file).with_context(|| format!("invalid table in {}", path.display()))
}

/// Parse `text` as one of the tool's JSON documents and return its kind.
pub fn validate(text: &str) -> Result<OutputKind> {
    let value: serde_json::Value = serde_json::from_str(text).context("not JSON")?;
    let kind = match value.get("kind") {
        Some(k) => serde_json::from_value(k.clone()).context("unknown kind")?,
        None => OutputKind::FunctionTable,
    };
    match kind {
        OutputKind::FunctionTable => {
            let file: FunctionTableFile = serde_json::from_value(value)?;
            FunctionTable::from_file(&file)?;
        }
        OutputKind::CheckReport | OutputKind::DesignReport => {
            let out: ReportOutput = serde_json::from_value(value)?;
            if out.kind != kind {
                bail!("kind mismatch");
            }
            if out.verdict != out.reports.iter().all(|r| r.report.verdict) {
                bail!("overall verdict disagrees with the individual reports");
            }
        }
        OutputKind::Autocorrelation => {
            let out: AutocorrOutput = serde_json::from_value(value)?;
            if out.sequence.chars().count() != out.period {
                bail!("sequence length differs from the period");
            }
        }
        OutputKind::SearchReport => {
            let out: SearchOutput = serde_json::from_value(value)?;
            if out.report.db_count != out.report.survivors.len() as u64 {
                bail!("DB count differs from the number of survivors");
            }
        }
    }
    Ok(kind)
}
