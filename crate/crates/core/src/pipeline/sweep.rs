use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{render_table, Cell, EvalReport, MetricRow};

/// Mean and sample (n - 1) standard deviation. `std` is `None` below two values.
pub fn mean_std(values: &[f64]) -> Cell {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = (values.len() >= 2).then(|| {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1.0)).sqrt()
    });
    Cell { mean, std }
}

/// Per-θ reports plus their aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub thetas: Vec<usize>,
    pub runs: Vec<EvalReport>,
    pub dcg_at: BTreeMap<usize, Cell>,
    pub recall_at: BTreeMap<usize, Cell>,
    pub f1: Option<Cell>,
    pub config: BTreeMap<String, String>,
}

impl SweepReport {
    pub fn aggregate(thetas: Vec<usize>, runs: Vec<EvalReport>, config: BTreeMap<String, String>) -> Result<Self> {
        if runs.is_empty() || runs.len() != thetas.len() {
            return Err(Error::EmptyEvaluation);
        }
        let column = |pick: fn(&EvalReport) -> &BTreeMap<usize, f64>| -> BTreeMap<usize, Cell> {
            pick(&runs[0])
                .keys()
                .filter_map(|&k| {
                    let values: Option<Vec<f64>> = runs.iter().map(|r| pick(r).get(&k).copied()).collect();
                    values.map(|v| (k, mean_std(&v)))
                })
                .collect()
        };
        let dcg_at = column(|r| &r.dcg_at);
        let recall_at = column(|r| &r.recall_at);
        let f1 = runs
            .iter()
            .map(|r| r.f1_mean)
            .collect::<Option<Vec<f64>>>()
            .map(|v| mean_std(&v));
        Ok(Self {
            thetas,
            runs,
            dcg_at,
            recall_at,
            f1,
            config,
        })
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("sweep serializes");
        out.push('\n');
        out
    }

    pub fn from_json(raw: &str) -> Result<Self> {
        serde_json::from_str(raw).map_err(|e| Error::json("parsing sweep report", e))
    }

    pub fn render(&self, label: &str) -> String {
        let mut out = String::new();
        if !self.dcg_at.is_empty() {
            out += &render_table(&[MetricRow {
                label: label.to_string(),
                dcg: self.dcg_at.clone(),
                recall: self.recall_at.clone(),
            }]);
        }
        if let Some(f1) = self.f1 {
            out += &crate::evaluation::render_f1_table(&[(label.to_string(), f1)]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_std() {
        let c = mean_std(&[2.0, 4.0, 6.0]);
        assert_eq!(c.mean, 4.0);
        assert_eq!(c.std, Some(2.0));
        assert_eq!(mean_std(&[5.0]).std, None);
    }
}
