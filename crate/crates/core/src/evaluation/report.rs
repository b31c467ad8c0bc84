use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub query_id: String,
    pub gold_chunk_id: Option<String>,
    /// 1-based rank of the gold parent in the full ranking.
    pub rank: Option<usize>,
    /// Best bag-of-words F1 against the gold answers, in `[0, 1]`.
    pub f1: Option<f64>,
}

/// Per-query outcomes plus aggregate metrics on a 0-100 scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_query: Vec<QueryResult>,
    pub dcg_at: BTreeMap<usize, f64>,
    pub recall_at: BTreeMap<usize, f64>,
    pub f1_mean: Option<f64>,
    pub config: BTreeMap<String, String>,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn from_json(raw: &str) -> Result<Self> {
        serde_json::from_str(raw).map_err(|e| Error::json("parsing report", e))
    }

    pub fn ranks(&self) -> Vec<Option<usize>> {
        self.per_query.iter().map(|q| q.rank).collect()
    }
}

/// Mean and, when available, standard deviation of one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub mean: f64,
    pub std: Option<f64>,
}

impl Cell {
    pub fn single(mean: f64) -> Self {
        Self { mean, std: None }
    }

    fn render(&self) -> String {
        match self.std {
            Some(std) => format!("{:.2} ± {:.2}", self.mean, std),
            None => format!("{:.2}", self.mean),
        }
    }
}

/// One method's line in a results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub label: String,
    pub dcg: BTreeMap<usize, Cell>,
    pub recall: BTreeMap<usize, Cell>,
}

impl MetricRow {
    pub fn from_report(label: impl Into<String>, report: &EvalReport) -> Self {
        let cells = |m: &BTreeMap<usize, f64>| m.iter().map(|(&k, &v)| (k, Cell::single(v))).collect();
        Self {
            label: label.into(),
            dcg: cells(&report.dcg_at),
            recall: cells(&report.recall_at),
        }
    }
}

/// Aligned plain-text table: a DCG@k block followed by a Recall@k block.
pub fn render_table(rows: &[MetricRow]) -> String {
    let mut out = String::new();
    for (title, pick) in [
        ("DCG@k", (|r: &MetricRow| &r.dcg) as fn(&MetricRow) -> &BTreeMap<usize, Cell>),
        ("Recall@k", |r: &MetricRow| &r.recall),
    ] {
        let ks: Vec<usize> = rows
            .iter()
            .flat_map(|r| pick(r).keys().copied())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                ks.iter()
                    .map(|k| pick(r).get(k).map_or_else(|| "-".to_string(), Cell::render))
                    .collect()
            })
            .collect();
        let label_width = rows.iter().map(|r| r.label.chars().count()).max().unwrap_or(0).max(6);
        let widths: Vec<usize> = ks
            .iter()
            .enumerate()
            .map(|(i, k)| {
                cells
                    .iter()
                    .map(|row| row[i].chars().count())
                    .chain([k.to_string().len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();

        let _ = writeln!(out, "{title}");
        let _ = write!(out, "{:<label_width$}", "Method");
        for (k, w) in ks.iter().zip(&widths) {
            let _ = write!(out, "  {:>w$}", k, w = *w);
        }
        out.push('\n');
        for (row, row_cells) in rows.iter().zip(&cells) {
            let _ = write!(out, "{:<label_width$}", row.label);
            for (cell, w) in row_cells.iter().zip(&widths) {
                let pad = w - cell.chars().count();
                let _ = write!(out, "  {}{}", " ".repeat(pad), cell);
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// Aligned plain-text table of mean F1 per method.
pub fn render_f1_table(rows: &[(String, Cell)]) -> String {
    let label_width = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0).max(6);
    let cells: Vec<String> = rows.iter().map(|(_, c)| c.render()).collect();
    let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(0).max(2);
    let mut out = format!("{:<label_width$}  {:>width$}\n", "Method", "F1");
    for ((label, _), cell) in rows.iter().zip(&cells) {
        let pad = width - cell.chars().count();
        let _ = writeln!(out, "{label:<label_width$}  {}{cell}", " ".repeat(pad));
    }
    out
}
