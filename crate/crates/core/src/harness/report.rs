use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::HarnessError;

use super::MCReportRow;

pub const CSV_HEADER: [&str; 8] = [
    "n",
    "word",
    "samples",
    "mean_fix",
    "stderr",
    "exact_fix",
    "series_partial",
    "abs_err",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

pub fn render_csv(rows: &[MCReportRow]) -> Result<String, HarnessError> {
    render_records_csv(&CSV_HEADER, rows)
}

pub fn render_json(rows: &[MCReportRow]) -> Result<String, HarnessError> {
    render_records_json(rows)
}

/// CSV with an explicit header, so an empty table still has one line.
pub fn render_records_csv<T: Serialize>(
    header: &[&str],
    rows: &[T],
) -> Result<String, HarnessError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let ser = |e: csv::Error| HarnessError::Serialize(e.to_string());
    w.write_record(header).map_err(ser)?;
    for r in rows {
        w.serialize(r).map_err(ser)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| HarnessError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Serialize(e.to_string()))
}

pub fn render_records_json<T: Serialize + ?Sized>(rows: &T) -> Result<String, HarnessError> {
    let mut text =
        serde_json::to_string_pretty(rows).map_err(|e| HarnessError::Serialize(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn write_text(out_path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(out_path, text).map_err(|source| HarnessError::Io {
        path: out_path.to_path_buf(),
        source,
    })
}

pub fn emit_report(
    rows: &[MCReportRow],
    format: ReportFormat,
    out_path: &Path,
) -> Result<(), HarnessError> {
    let text = match format {
        ReportFormat::Csv => render_csv(rows)?,
        ReportFormat::Json => render_json(rows)?,
    };
    write_text(out_path, &text)
}
