use jpsn::diagnostics::credible_interval_95;
use jpsn::model::{CellKind, DependenceMatrix};

use crate::draws::Table;

/// Posterior mean, equal-tailed 95% interval and effective sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub name: String,
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
    pub ess: Option<f64>,
}

pub fn summarize_table(table: &Table) -> Vec<SummaryRow> {
    table
        .names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let xs = table.column(k);
            let (lower, upper) = credible_interval_95(&xs);
            SummaryRow {
                name: name.clone(),
                mean: xs.iter().sum::<f64>() / xs.len() as f64,
                lower,
                upper,
                ess: jpsn::mcmc::ess(&xs).ok(),
            }
        })
        .collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |v| format!("{v}"))
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["parameter", "mean", "lower95", "upper95", "ess"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.name.clone(),
            format!("{}", r.mean),
            format!("{}", r.lower),
            format!("{}", r.upper),
            fmt_opt(r.ess),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

/// Aligned text table for the terminal.
pub fn summary_text(rows: &[SummaryRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(9).max(9);
    let mut out = format!(
        "{:<width$} {:>10} {:>10} {:>10} {:>8}\n",
        "parameter", "mean", "2.5%", "97.5%", "ESS"
    );
    for r in rows {
        let ess = r.ess.map_or_else(|| "NA".into(), |e| format!("{e:.0}"));
        out.push_str(&format!(
            "{:<width$} {:>10.4} {:>10.4} {:>10.4} {:>8}\n",
            r.name, r.mean, r.lower, r.upper, ess
        ));
    }
    out
}

/// Long-format dependence table, one row per ordered pair of variables.
pub fn dependence_csv(m: &DependenceMatrix, labels: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["var_a", "var_b", "kind", "mean", "lower95", "upper95", "flagged"])
        .expect("in-memory write");
    let k = m.p + m.q;
    for a in 0..k {
        for b in 0..k {
            let kind = match m.kind(a, b) {
                CellKind::Diagonal => "diagonal",
                CellKind::CircularCircular => "circular-circular",
                CellKind::CircularLinear => "circular-linear",
                CellKind::LinearLinear => "linear-linear",
            };
            w.write_record([
                labels[a].clone(),
                labels[b].clone(),
                kind.to_string(),
                format!("{}", m.mean[(a, b)]),
                format!("{}", m.lower[(a, b)]),
                format!("{}", m.upper[(a, b)]),
                m.flagged[a][b].to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}
