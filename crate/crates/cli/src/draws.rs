//! Flat CSV files of posterior draws, one row per stored iteration, with a
//! JSON sidecar for metadata.

use std::path::Path;

use jpsn::baselines::AbeLeyDraws;
use jpsn::linalg::{Matrix, Vector};
use jpsn::mcmc::{free_parameter_names, free_parameter_values, PosteriorDraws};
use jpsn::model::JpsnParams;
use jpsn::Coord;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const IDENTIFIED_FILE: &str = "draws.csv";
pub const RAW_FILE: &str = "raw.csv";
pub const IMPUTED_FILE: &str = "imputed.csv";
pub const ABELEY_FILE: &str = "abeley.csv";
pub const META_FILE: &str = "draws.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssEntry {
    pub name: String,
    pub ess: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawsMeta {
    pub model: String,
    pub p: usize,
    pub q: usize,
    pub stored: usize,
    pub labels: Vec<String>,
    /// Column names of the imputed file.
    pub missing: Vec<String>,
    pub ess: Vec<EssEntry>,
    /// Metropolis acceptance rates and final step scales, Abe-Ley only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_scales: Option<Vec<f64>>,
}

/// A CSV of named numeric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[k]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.names).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v}"))).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> CliResult<Table> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
        let names: Vec<String> = reader
            .headers()
            .map_err(|e| csv_error(path, e))?
            .iter()
            .map(String::from)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| csv_error(path, e))?;
            let row = record
                .iter()
                .map(|c| {
                    c.parse::<f64>().map_err(|_| {
                        CliError::Data(format!("{}: `{c}` is not a number", path.display()))
                    })
                })
                .collect::<CliResult<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Table { names, rows })
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::io(path, source),
        other => CliError::Data(format!("{}: {other:?}", path.display())),
    }
}

/// Every `μ` entry, the full upper triangle of `Σ`, then `λ`.
pub fn raw_parameter_names(p: usize, q: usize) -> Vec<String> {
    let n = 2 * p + q;
    let mut names: Vec<String> = (1..=n).map(|k| format!("mu[{k}]")).collect();
    for i in 1..=n {
        names.extend((i..=n).map(|j| format!("sigma[{i},{j}]")));
    }
    names.extend((1..=q).map(|j| format!("lambda[{j}]")));
    names
}

pub fn raw_parameter_values(params: &JpsnParams) -> Vec<f64> {
    let n = params.dim();
    let mut out: Vec<f64> = params.mu.iter().copied().collect();
    for i in 0..n {
        out.extend((i..n).map(|j| params.sigma[(i, j)]));
    }
    out.extend(params.lambda.iter());
    out
}

/// Free identified parameters followed by the scale factors `c[i]`.
pub fn identified_names(p: usize, q: usize) -> Vec<String> {
    let mut names = free_parameter_names(p, q);
    names.extend((1..=p).map(|i| format!("c[{i}]")));
    names
}

pub fn identified_table(draws: &PosteriorDraws) -> Table {
    Table {
        names: identified_names(draws.p, draws.q),
        rows: draws
            .identified
            .iter()
            .map(|d| {
                let mut row = free_parameter_values(&d.params);
                row.extend(&d.c.0);
                row
            })
            .collect(),
    }
}

/// `label@row` with a 1-based record number.
pub fn entry_name(labels: &[String], p: usize, row: usize, coord: Coord) -> String {
    let label = match coord {
        Coord::Angle(i) => &labels[i],
        Coord::Linear(j) => &labels[p + j],
    };
    format!("{label}@{}", row + 1)
}

fn ess_entries(names: &[String], table: &Table) -> Vec<EssEntry> {
    names
        .iter()
        .enumerate()
        .map(|(k, name)| EssEntry {
            name: name.clone(),
            ess: jpsn::mcmc::ess(&table.column(k)).ok(),
        })
        .collect()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_meta(dir: &Path) -> CliResult<Option<DrawsMeta>> {
    let path = dir.join(META_FILE);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Writes identified, raw and imputed draws plus the sidecar into `dir`;
/// returns the file names written.
pub fn write_jpsn_draws(
    dir: &Path,
    model: &str,
    draws: &PosteriorDraws,
    labels: &[String],
) -> CliResult<Vec<String>> {
    let (p, q) = (draws.p, draws.q);
    let identified = identified_table(draws);
    identified.write(&dir.join(IDENTIFIED_FILE))?;
    Table {
        names: raw_parameter_names(p, q),
        rows: draws.raw.iter().map(|d| raw_parameter_values(&d.params)).collect(),
    }
    .write(&dir.join(RAW_FILE))?;
    let mut files = vec![IDENTIFIED_FILE.to_string(), RAW_FILE.to_string()];
    let missing: Vec<String> = draws
        .missing
        .iter()
        .map(|&(row, c)| entry_name(labels, p, row, c))
        .collect();
    if !missing.is_empty() {
        Table {
            names: missing.clone(),
            rows: draws.raw.iter().map(|d| d.imputed.clone()).collect(),
        }
        .write(&dir.join(IMPUTED_FILE))?;
        files.push(IMPUTED_FILE.into());
    }
    let meta = DrawsMeta {
        model: model.into(),
        p,
        q,
        stored: draws.len(),
        labels: labels.to_vec(),
        missing,
        ess: draws
            .meta
            .ess
            .iter()
            .map(|(name, ess)| EssEntry {
                name: name.clone(),
                ess: *ess,
            })
            .collect(),
        acceptance: None,
        step_scales: None,
    };
    write_json(&dir.join(META_FILE), &meta)?;
    files.push(META_FILE.into());
    Ok(files)
}

pub const ABELEY_NAMES: [&str; 5] = ["alpha", "beta", "mu", "kappa", "lambda"];

pub fn abeley_table(draws: &AbeLeyDraws) -> Table {
    Table {
        names: ABELEY_NAMES.iter().map(|s| s.to_string()).collect(),
        rows: draws
            .params
            .iter()
            .map(|a| vec![a.alpha(), a.beta(), a.mu().value(), a.kappa(), a.lambda()])
            .collect(),
    }
}

pub fn write_abeley_draws(dir: &Path, draws: &AbeLeyDraws, labels: &[String]) -> CliResult<Vec<String>> {
    let table = abeley_table(draws);
    table.write(&dir.join(ABELEY_FILE))?;
    let mut files = vec![ABELEY_FILE.to_string()];
    let missing: Vec<String> = draws
        .missing
        .iter()
        .map(|&(row, c)| entry_name(labels, 1, row, c))
        .collect();
    if !missing.is_empty() {
        Table {
            names: missing.clone(),
            rows: draws.imputed.clone(),
        }
        .write(&dir.join(IMPUTED_FILE))?;
        files.push(IMPUTED_FILE.into());
    }
    let meta = DrawsMeta {
        model: "abeley".into(),
        p: 1,
        q: 1,
        stored: draws.params.len(),
        labels: labels.to_vec(),
        missing,
        ess: ess_entries(&table.names, &table),
        acceptance: Some(draws.acceptance.to_vec()),
        step_scales: Some(draws.step_scales.to_vec()),
    };
    write_json(&dir.join(META_FILE), &meta)?;
    files.push(META_FILE.into());
    Ok(files)
}

/// `(p, q)` implied by the column names of an identified draws file.
pub fn dims_from_names(names: &[String]) -> CliResult<(usize, usize)> {
    let n = names.iter().filter(|s| s.starts_with("mu[")).count();
    let q = names.iter().filter(|s| s.starts_with("lambda[")).count();
    if n < q || (n - q) % 2 != 0 {
        return Err(CliError::Data("draws columns do not describe a JPSN".into()));
    }
    let p = (n - q) / 2;
    if names != identified_names(p, q).as_slice() {
        return Err(CliError::Data(format!(
            "unexpected draws columns for p = {p}, q = {q}"
        )));
    }
    Ok((p, q))
}

/// Rebuilds identified parameters from one row of an identified draws file.
pub fn params_from_row(p: usize, q: usize, row: &[f64]) -> CliResult<JpsnParams> {
    let n = 2 * p + q;
    let mu = Vector::from_column_slice(&row[..n]);
    let mut sigma = Matrix::zeros(n, n);
    let mut k = n;
    for i in 0..n {
        for j in i..n {
            let v = if i == j && i < 2 * p && i % 2 == 1 {
                1.0
            } else {
                k += 1;
                row[k - 1]
            };
            sigma[(i, j)] = v;
            sigma[(j, i)] = v;
        }
    }
    let lambda = Vector::from_column_slice(&row[k..k + q]);
    Ok(JpsnParams::new_constrained(p, q, mu, sigma, lambda)?)
}

/// Identified parameter draws stored in `dir`.
pub fn read_identified_params(dir: &Path) -> CliResult<(usize, usize, Vec<JpsnParams>)> {
    let table = Table::read(&dir.join(IDENTIFIED_FILE))?;
    let (p, q) = dims_from_names(&table.names)?;
    let params = table
        .rows
        .iter()
        .map(|r| params_from_row(p, q, r))
        .collect::<CliResult<Vec<_>>>()?;
    Ok((p, q, params))
}
