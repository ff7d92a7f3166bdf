//! Robustness aggregation: corrupted-over-clean ratios per (pattern,
//! severity) cell, per-severity means, and the overall mean, rendered as
//! JSON, CSV, or a markdown table.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corrupt::{Pattern, SeverityTable, ALL_PATTERNS};
use crate::error::{Error, Result};
use crate::metrics::{RunResult, Task};

/// Hex digest of the severity table in effect, for report metadata.
pub fn severity_config_hash(table: &SeverityTable) -> String {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(table.to_toml_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Ratio of corrupted to clean performance, oriented so 1 means "unchanged"
/// and smaller means "more degraded" for every task.
///
/// Score metrics (AP, MOTA) use `corrupted / clean`; MOTA is clamped below
/// at 0 first, since it can be negative. The error metric (RMSE) has no
/// published normalization, so the parameter-free inverse ratio
/// `clean / corrupted` is used and flagged in report metadata.
pub fn robustness_score(corrupted: f64, clean: f64, task: Task) -> Result<f64> {
    if !corrupted.is_finite() || !clean.is_finite() {
        return Err(Error::UndefinedRobustness {
            reason: format!("non-finite metric values ({corrupted}, {clean})"),
        });
    }
    if task.is_error_metric() {
        if clean < 0.0 || corrupted < 0.0 {
            return Err(Error::UndefinedRobustness {
                reason: "error metrics cannot be negative".to_string(),
            });
        }
        if corrupted == 0.0 {
            return Err(Error::UndefinedRobustness {
                reason: "corrupted error is zero; ratio clean/corrupted is undefined".to_string(),
            });
        }
        Ok(clean / corrupted)
    } else {
        let corrupted = corrupted.max(0.0);
        let clean = clean.max(0.0);
        if clean == 0.0 {
            return Err(Error::UndefinedRobustness {
                reason: "clean score is zero; ratio corrupted/clean is undefined".to_string(),
            });
        }
        Ok(corrupted / clean)
    }
}

/// One robustness cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub pattern: String,
    pub severity: u8,
    /// Raw task metric on the corrupted data.
    pub value: f64,
    pub rb: f64,
}

/// Mean of the per-pattern scores at the severities actually present:
/// `mean over severities of (mean over patterns)`.
pub fn mean_robustness(cells: &[ReportCell]) -> Result<f64> {
    if cells.is_empty() {
        return Err(Error::EmptyRobustnessSet);
    }
    let severities: BTreeSet<u8> = cells.iter().map(|c| c.severity).collect();
    let mut total = 0.0;
    for &s in &severities {
        let at: Vec<f64> = cells
            .iter()
            .filter(|c| c.severity == s)
            .map(|c| c.rb)
            .collect();
        total += at.iter().sum::<f64>() / at.len() as f64;
    }
    Ok(total / severities.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeverityMean {
    pub severity: u8,
    pub mean_rb: f64,
    pub patterns_present: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub toolkit_version: String,
    /// Hash of the severity table in effect, for reproduction audits.
    pub config_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// How the error metric was normalized into a ratio.
    pub rmse_normalization: String,
}

impl Default for ReportMeta {
    fn default() -> Self {
        ReportMeta {
            toolkit_version: crate::toolkit_version().to_string(),
            config_hash: String::new(),
            seed: None,
            rmse_normalization: "inverse ratio clean/corrupted (no published formula)".to_string(),
        }
    }
}

/// The full robustness table for one system and task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub task: Task,
    pub clean: f64,
    pub cells: Vec<ReportCell>,
    pub per_severity: Vec<SeverityMean>,
    pub mrb: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub meta: ReportMeta,
}

/// Canonical column order for a pattern code; unknown codes sort last,
/// alphabetically.
fn pattern_rank(code: &str) -> (usize, String) {
    match ALL_PATTERNS.iter().position(|p| p.code() == code) {
        Some(i) => (i, String::new()),
        None => (ALL_PATTERNS.len(), code.to_string()),
    }
}

/// Builds the report from one clean result and the corrupted runs.
pub fn build_report(
    clean: &RunResult,
    corrupted: &[RunResult],
    meta: ReportMeta,
) -> Result<RobustnessReport> {
    if !clean.is_clean() {
        return Err(Error::CleanBaseline { found: 0 });
    }
    if corrupted.is_empty() {
        return Err(Error::EmptyRobustnessSet);
    }

    let mut cells = Vec::with_capacity(corrupted.len());
    let mut seen = BTreeSet::new();
    for run in corrupted {
        if run.is_clean() {
            return Err(Error::CleanBaseline { found: 2 });
        }
        if run.task != clean.task {
            return Err(Error::InvalidInput(format!(
                "run for pattern {} is task {}, clean baseline is task {}",
                run.pattern, run.task, clean.task
            )));
        }
        let severity = run.severity.ok_or_else(|| {
            Error::InvalidInput(format!("corrupted run {} has no severity", run.pattern))
        })?;
        if !seen.insert((run.pattern.clone(), severity)) {
            return Err(Error::InvalidInput(format!(
                "duplicate cell for pattern {} severity {}",
                run.pattern, severity
            )));
        }
        cells.push(ReportCell {
            pattern: run.pattern.clone(),
            severity,
            value: run.metric_value,
            rb: robustness_score(run.metric_value, clean.metric_value, clean.task)?,
        });
    }
    cells.sort_by(|a, b| {
        pattern_rank(&a.pattern)
            .cmp(&pattern_rank(&b.pattern))
            .then(a.severity.cmp(&b.severity))
    });

    let severities: BTreeSet<u8> = cells.iter().map(|c| c.severity).collect();
    let patterns: BTreeSet<&str> = cells.iter().map(|c| c.pattern.as_str()).collect();
    let mut warnings = Vec::new();
    for &s in &severities {
        for &p in &patterns {
            if !cells.iter().any(|c| c.severity == s && c.pattern == p) {
                warnings.push(format!(
                    "cell ({p}, severity {s}) is missing and excluded from the means"
                ));
            }
        }
    }

    let per_severity = severities
        .iter()
        .map(|&s| {
            let at: Vec<f64> = cells
                .iter()
                .filter(|c| c.severity == s)
                .map(|c| c.rb)
                .collect();
            SeverityMean {
                severity: s,
                mean_rb: at.iter().sum::<f64>() / at.len() as f64,
                patterns_present: at.len(),
            }
        })
        .collect();

    let mrb = mean_robustness(&cells)?;
    Ok(RobustnessReport {
        task: clean.task,
        clean: clean.metric_value,
        cells,
        per_severity,
        mrb,
        warnings,
        meta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<ReportFormat> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
        }
    }
}

/// Patterns present, in canonical column order.
fn ordered_patterns(report: &RobustnessReport) -> Vec<String> {
    let mut patterns: Vec<String> = report
        .cells
        .iter()
        .map(|c| c.pattern.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    patterns.sort_by_key(|p| pattern_rank(p));
    patterns
}

fn column_label(code: &str) -> String {
    Pattern::parse_code(code).map_or_else(|| code.to_string(), |p| p.column_label().to_string())
}

fn pattern_mean(report: &RobustnessReport, pattern: &str) -> f64 {
    let at: Vec<f64> = report
        .cells
        .iter()
        .filter(|c| c.pattern == pattern)
        .map(|c| c.rb)
        .collect();
    at.iter().sum::<f64>() / at.len() as f64
}

pub fn render_json(report: &RobustnessReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// One row per pattern: per-severity scores then the pattern mean.
pub fn render_csv(report: &RobustnessReport) -> String {
    let severities: Vec<u8> = report.per_severity.iter().map(|s| s.severity).collect();
    let mut out = String::from("pattern");
    for s in &severities {
        out.push_str(&format!(",rb_s{s}"));
    }
    out.push_str(",mean\n");
    for pattern in ordered_patterns(report) {
        out.push_str(&pattern);
        for &s in &severities {
            match report
                .cells
                .iter()
                .find(|c| c.pattern == pattern && c.severity == s)
            {
                Some(cell) => out.push_str(&format!(",{:.6}", cell.rb)),
                None => out.push(','),
            }
        }
        out.push_str(&format!(",{:.6}\n", pattern_mean(report, &pattern)));
    }
    out
}

/// One-row markdown table shaped like the published results: per-pattern
/// mean scores, then per-severity means, then the overall mean.
pub fn render_markdown(report: &RobustnessReport) -> String {
    let patterns = ordered_patterns(report);
    let mut header = String::from("|");
    let mut rule = String::from("|");
    let mut row = String::from("|");
    for pattern in &patterns {
        header.push_str(&format!(" {} |", column_label(pattern)));
        rule.push_str("---|");
        row.push_str(&format!(" {:.2} |", pattern_mean(report, pattern)));
    }
    for s in &report.per_severity {
        header.push_str(&format!(" Rb^s{} |", s.severity));
        rule.push_str("---|");
        row.push_str(&format!(" {:.2} |", s.mean_rb));
    }
    header.push_str(" mRb |");
    rule.push_str("---|");
    row.push_str(&format!(" {:.2} |", report.mrb));
    format!("{header}\n{rule}\n{row}\n")
}

pub fn render(report: &RobustnessReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => render_json(report),
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Markdown => render_markdown(report),
    }
}
