//! CSV ingestion and emission.
//!
//! Input contract: UTF-8, first row a header of unique non-empty column
//! names, every following row the same arity of decimal numbers ('.'
//! separator; LF or CRLF). Violations are reported with 1-based line
//! numbers. Output uses the shortest decimal representation that parses
//! back to the identical bits, so a generated file reloads exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use tscausal_core::{Edge, TimeSeries};

use crate::error::CliError;

/// Reads one series per column, named from the header, in column order.
pub fn parse_csv(path: &Path) -> Result<Vec<TimeSeries>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        .iter()
        .map(|h| h.to_string())
        .collect();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(CliError::Data(format!("{}: empty file", path.display())));
    }
    for (i, h) in headers.iter().enumerate() {
        if h.is_empty() {
            return Err(CliError::Data(format!(
                "{}: malformed csv at line 1: empty column name in position {}",
                path.display(),
                i + 1
            )));
        }
        if headers[..i].contains(h) {
            return Err(CliError::Data(format!(
                "{}: malformed csv at line 1: duplicate column name '{h}'",
                path.display()
            )));
        }
    }

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
    for row in reader.records() {
        let record = row.map_err(|e| {
            let line = match e.kind() {
                csv::ErrorKind::UnequalLengths { pos, .. } => {
                    pos.as_ref().map(|p| p.line()).unwrap_or(0)
                }
                _ => e.position().map(|p| p.line()).unwrap_or(0),
            };
            CliError::Data(format!(
                "{}: malformed csv at line {line}: {e}",
                path.display()
            ))
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        for (i, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| {
                CliError::Data(format!(
                    "{}: malformed csv at line {line}: column '{}' holds '{cell}', not a decimal number",
                    path.display(),
                    headers[i]
                ))
            })?;
            if !value.is_finite() {
                return Err(CliError::Data(format!(
                    "{}: malformed csv at line {line}: column '{}' holds the non-finite value '{cell}'",
                    path.display(),
                    headers[i]
                )));
            }
            columns[i].push(value);
        }
    }
    if columns[0].is_empty() {
        return Err(CliError::Data(format!(
            "{}: empty file (no data rows)",
            path.display()
        )));
    }

    headers
        .into_iter()
        .zip(columns)
        .map(|(name, values)| {
            TimeSeries::new(&name, values)
                .map_err(|e| CliError::Data(format!("{}: column '{name}': {e}", path.display())))
        })
        .collect()
}

/// Writes aligned series as CSV, one column per series.
pub fn write_csv(path: &Path, series: &[TimeSeries]) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    let names: Vec<&str> = series.iter().map(|s| s.name()).collect();
    writeln!(out, "{}", names.join(","))?;
    let n = series.first().map(|s| s.len()).unwrap_or(0);
    for t in 0..n {
        let row: Vec<String> = series.iter().map(|s| s.values()[t].to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the ground-truth sidecar: one row per directed edge.
pub fn write_truth(path: &Path, truth: &[Edge]) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "source,target,strength")?;
    for e in truth {
        writeln!(out, "{},{},{}", e.source, e.target, e.strength)?;
    }
    out.flush()?;
    Ok(())
}

/// The sidecar path for a data file: `out.csv` -> `out.truth.csv`.
pub fn truth_path(data_path: &Path) -> std::path::PathBuf {
    let stem = data_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "synth".to_string());
    data_path.with_file_name(format!("{stem}.truth.csv"))
}
