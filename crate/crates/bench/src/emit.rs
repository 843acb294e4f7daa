//! CSV and JSON renderings of a [`ResultTable`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use daplsr::Method;

use crate::config::Format;
use crate::runner::{ResultRow, ResultTable};
use crate::BenchError;

pub const CSV_HEADER: &str = "method,components,error_mean,error_std,accuracy,g_mean,precision,recall,f_measure";

/// One row per (method, components); metric columns hold means.
pub fn to_csv(table: &ResultTable) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            r.method,
            r.components,
            r.error.mean,
            r.error.std,
            r.accuracy.mean,
            r.g_mean.mean,
            r.precision.mean,
            r.recall.mean,
            r.f_measure.mean
        );
    }
    out
}

/// Parsed CSV line.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub method: Method,
    pub components: usize,
    /// `error_mean, error_std, accuracy, g_mean, precision, recall, f_measure`.
    pub values: [f64; 7],
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, BenchError> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(BenchError::Format("unexpected CSV header".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 9 {
                return Err(BenchError::Format(format!("expected 9 fields in {line:?}")));
            }
            let bad = |f: &str| BenchError::Format(format!("bad field {f:?} in {line:?}"));
            let method = fields[0].parse().map_err(|_| bad(fields[0]))?;
            let components = fields[1].parse().map_err(|_| bad(fields[1]))?;
            let mut values = [0.0; 7];
            for (v, f) in values.iter_mut().zip(&fields[2..]) {
                *v = f.parse().map_err(|_| bad(f))?;
            }
            Ok(CsvRow {
                method,
                components,
                values,
            })
        })
        .collect()
}

/// Rows grouped under their method name. An empty table renders as `{}`.
pub fn to_json(table: &ResultTable) -> Result<String, BenchError> {
    let mut grouped: BTreeMap<String, Vec<&ResultRow>> = BTreeMap::new();
    for r in &table.rows {
        grouped.entry(r.method.to_string()).or_default().push(r);
    }
    let mut text = serde_json::to_string_pretty(&grouped)?;
    text.push('\n');
    Ok(text)
}

pub fn from_json(text: &str) -> Result<ResultTable, BenchError> {
    let grouped: BTreeMap<String, Vec<ResultRow>> = serde_json::from_str(text)?;
    for (key, rows) in &grouped {
        if rows.iter().any(|r| r.method.name() != key) {
            return Err(BenchError::Format(format!("row filed under wrong method {key:?}")));
        }
    }
    Ok(ResultTable::from_rows(grouped.into_values().flatten().collect()))
}

pub fn render(table: &ResultTable, format: Format) -> Result<String, BenchError> {
    match format {
        Format::Csv => Ok(to_csv(table)),
        Format::Json => to_json(table),
    }
}

pub fn emit(table: &ResultTable, format: Format, path: &Path) -> Result<(), BenchError> {
    let text = render(table, format)?;
    std::fs::write(path, text).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}
