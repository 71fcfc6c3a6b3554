//! Sampled-function CSV: header `x,y`, one decimal pair per row, strictly
//! increasing `x`, UTF-8, LF or CRLF line endings.

use std::path::Path;

use crate::domain::{Interp, SampledTable};
use crate::error::{Error, Result};

pub fn parse_sampled_csv(input: &[u8]) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let header = reader.headers().map_err(csv_err)?;
    if header.len() != 2 || &header[0] != "x" || &header[1] != "y" {
        return Err(Error::Csv { line: Some(1), msg: "header must be `x,y`".into() });
    }
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map(|p| p.line());
        if record.len() != 2 {
            return Err(Error::Csv { line, msg: format!("expected 2 fields, got {}", record.len()) });
        }
        let x = decimal(&record[0], line)?;
        let y = decimal(&record[1], line)?;
        if let Some(&(prev, _)) = pairs.last() {
            if !(x > prev) {
                return Err(Error::Csv { line, msg: format!("x = {x} does not exceed {prev}") });
            }
        }
        pairs.push((x, y));
    }
    if pairs.is_empty() {
        return Err(Error::Csv { line: None, msg: "no samples".into() });
    }
    Ok(pairs)
}

pub fn read_sampled_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Csv { line: None, msg: format!("{}: {e}", path.display()) })?;
    parse_sampled_csv(&bytes)
}

pub fn table_from_csv(input: &[u8], interp: Interp) -> Result<SampledTable> {
    SampledTable::from_pairs(&parse_sampled_csv(input)?, interp)
}

fn decimal(field: &str, line: Option<u64>) -> Result<f64> {
    parse_decimal(field).ok_or_else(|| Error::Csv { line, msg: format!("`{field}` is not a decimal number") })
}

/// Finite decimal literal; rejects `inf`, `NaN` and hex forms.
pub(crate) fn parse_decimal(field: &str) -> Option<f64> {
    let ok = !field.is_empty()
        && field.bytes().any(|b| b.is_ascii_digit())
        && field.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'));
    field.parse::<f64>().ok().filter(|v| ok && v.is_finite())
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line());
    Error::Csv { line, msg: e.to_string() }
}
