//! Dataset CSV: a header of `theta:<name>` and `y:<name>` columns, decimal
//! cells, `NA` for a missing entry.

use std::path::Path;

use jpsn::{Angle, PolyCylDataset, PolyCylObservation};

use crate::error::{CliError, CliResult, ParseError};

pub const MISSING: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDataset {
    pub data: PolyCylDataset,
    /// Angles that lay outside `[0, 2π)` and were reduced.
    pub normalized: usize,
}

#[derive(Clone, Copy)]
enum Column {
    Angle(usize),
    Linear(usize),
}

pub fn parse_dataset_csv(path: &Path) -> CliResult<ParsedDataset> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_dataset_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_dataset_str(text: &str) -> Result<ParsedDataset, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let err = |line: u64, message: String| ParseError { line, message };

    let header = match records.next() {
        Some(r) => r.map_err(|e| err(1, e.to_string()))?,
        None => return Err(err(1, "empty file, expected a header row".into())),
    };
    let (mut angle_names, mut linear_names, mut columns) = (Vec::new(), Vec::new(), Vec::new());
    for cell in header.iter() {
        let (kind, name) = cell
            .split_once(':')
            .ok_or_else(|| err(1, format!("column `{cell}` must be `theta:<name>` or `y:<name>`")))?;
        if name.is_empty() {
            return Err(err(1, format!("column `{cell}` has an empty name")));
        }
        match kind {
            "theta" => {
                columns.push(Column::Angle(angle_names.len()));
                angle_names.push(name.to_string());
            }
            "y" => {
                columns.push(Column::Linear(linear_names.len()));
                linear_names.push(name.to_string());
            }
            _ => return Err(err(1, format!("unknown column kind `{kind}` in `{cell}`"))),
        }
    }
    if columns.is_empty() {
        return Err(err(1, "header declares no columns".into()));
    }
    let (p, q) = (angle_names.len(), linear_names.len());
    let mut labels = angle_names;
    labels.extend(linear_names);
    {
        let mut sorted = labels.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(err(1, format!("duplicate column name `{}`", w[0])));
        }
    }

    let mut observations = Vec::new();
    let mut normalized = 0;
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != columns.len() {
            return Err(err(
                line,
                format!("expected {} cells, found {}", columns.len(), record.len()),
            ));
        }
        let mut obs = PolyCylObservation {
            angles: vec![Angle::new(0.0); p],
            linears: vec![0.0; q],
            angle_missing: vec![false; p],
            linear_missing: vec![false; q],
        };
        for (cell, &col) in record.iter().zip(&columns) {
            let value = if cell == MISSING {
                None
            } else {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| err(line, format!("`{cell}` is neither a number nor {MISSING}")))?;
                if !v.is_finite() {
                    return Err(err(line, format!("`{cell}` is not finite")));
                }
                Some(v)
            };
            match (col, value) {
                (Column::Angle(i), Some(v)) => {
                    if !(0.0..std::f64::consts::TAU).contains(&v) {
                        normalized += 1;
                    }
                    obs.angles[i] = Angle::new(v);
                }
                (Column::Angle(i), None) => obs.angle_missing[i] = true,
                (Column::Linear(j), Some(v)) => obs.linears[j] = v,
                (Column::Linear(j), None) => obs.linear_missing[j] = true,
            }
        }
        observations.push(obs);
    }
    let data = PolyCylDataset::new(p, q, observations)
        .and_then(|d| d.with_labels(labels))
        .map_err(|e| err(1, e.to_string()))?;
    Ok(ParsedDataset { data, normalized })
}

/// Angle columns first, then linear columns; masked cells become `NA`.
pub fn dataset_to_csv(data: &PolyCylDataset) -> String {
    let labels = data.labels_or_default();
    let (p, q) = (data.p(), data.q());
    let mut out = String::new();
    let header: Vec<String> = labels
        .iter()
        .enumerate()
        .map(|(k, l)| if k < p { format!("theta:{l}") } else { format!("y:{l}") })
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for obs in data.observations() {
        let cells: Vec<String> = (0..p)
            .map(|i| obs.observed_angle(i).map(|a| a.value()))
            .chain((0..q).map(|j| obs.observed_linear(j)))
            .map(|v| v.map_or_else(|| MISSING.to_string(), |v| format!("{v}")))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
