use std::path::Path;

use crate::datasets;
use crate::distributions::CountSample;
use crate::{Error, Result};

/// Prefix of embedded dataset names, as in `builtin:cytogenetic`.
pub const BUILTIN_PREFIX: &str = "builtin:";

pub fn is_builtin(source: &str) -> bool {
    source.starts_with(BUILTIN_PREFIX)
}

/// Loads a dataset from `builtin:<name>` or from a file path.
pub fn parse_dataset(source: &str) -> Result<CountSample> {
    if let Some(name) = source.strip_prefix(BUILTIN_PREFIX) {
        return datasets::builtin(name);
    }
    let text = std::fs::read_to_string(Path::new(source))
        .map_err(|e| Error::Data(format!("cannot read {source}: {e}")))?;
    parse_dataset_str(&text)
}

fn parse_count(field: &str, what: &str, line: usize) -> Result<u64> {
    if let Ok(v) = field.parse::<u64>() {
        return Ok(v);
    }
    let msg = match field.parse::<f64>() {
        Ok(x) if x < 0.0 => format!("negative {what} '{field}'"),
        Ok(_) => format!("non-integer {what} '{field}'"),
        Err(_) => format!("invalid {what} '{field}'"),
    };
    Err(Error::Data(format!("line {line}: {msg}")))
}

fn is_header(fields: &[&str]) -> bool {
    fields.iter().all(|f| f.parse::<f64>().is_err() && !f.starts_with(">=") && !f.starts_with('≥'))
}

/// Parses either a frequency table (`value frequency` per line, the last
/// value optionally written `>=K`) or raw counts (one per line). Fields may
/// be separated by commas or whitespace; blank lines and `#` comments are
/// skipped, as is a non-numeric header line.
pub fn parse_dataset_str(text: &str) -> Result<CountSample> {
    let mut rows: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| (i, l.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect()))
        .collect();
    if rows.first().is_some_and(|(_, f)| is_header(f)) {
        rows.remove(0);
    }
    if rows.is_empty() {
        return Err(Error::Data("dataset is empty".into()));
    }
    let width = rows[0].1.len();
    if let Some((line, f)) = rows.iter().find(|(_, f)| f.len() != width) {
        return Err(Error::Data(format!("line {line}: expected {width} field(s), found {}", f.len())));
    }
    match width {
        1 => {
            let values = rows
                .iter()
                .map(|(line, f)| parse_count(f[0], "value", *line))
                .collect::<Result<Vec<u64>>>()?;
            CountSample::from_values(values)
        }
        2 => {
            let mut pairs = Vec::with_capacity(rows.len());
            let mut open = None;
            let last = rows.len() - 1;
            for (idx, (line, f)) in rows.iter().enumerate() {
                let (raw, is_open) = match f[0].strip_prefix(">=").or_else(|| f[0].strip_prefix('≥')) {
                    Some(rest) => (rest, true),
                    None => (f[0], false),
                };
                let value = parse_count(raw, "value", *line)?;
                let freq = parse_count(f[1], "frequency", *line)?;
                if is_open {
                    if idx != last {
                        return Err(Error::Data(format!("line {line}: only the last row may be open")));
                    }
                    open = Some(value);
                }
                pairs.push((value, freq));
            }
            let sample = CountSample::from_frequencies(pairs)?;
            match open {
                Some(k) => sample.with_open_tail(k),
                None => Ok(sample),
            }
        }
        n => Err(Error::Data(format!("expected 1 or 2 fields per line, found {n}"))),
    }
}
