use std::collections::HashMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RougeVariant {
    #[serde(rename = "rouge1")]
    One,
    #[serde(rename = "rouge2")]
    Two,
    #[default]
    #[serde(rename = "rougeL")]
    L,
}

impl RougeVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            RougeVariant::One => "rouge1",
            RougeVariant::Two => "rouge2",
            RougeVariant::L => "rougeL",
        }
    }
}

impl std::str::FromStr for RougeVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rouge1" | "rouge-1" => Ok(RougeVariant::One),
            "rouge2" | "rouge-2" => Ok(RougeVariant::Two),
            "rougel" | "rouge-l" => Ok(RougeVariant::L),
            other => Err(format!("unknown ROUGE variant `{other}`")),
        }
    }
}

/// Lowercased alphanumeric word tokens.
pub fn rouge_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// ROUGE-L F-measure (beta = 1) over word tokens.
pub fn rouge_l_f(candidate: &str, reference: &str) -> f64 {
    let c = rouge_tokens(candidate);
    let r = rouge_tokens(reference);
    f_measure(lcs_len(&c, &r), c.len(), r.len())
}

/// ROUGE F-measure of the chosen variant.
pub fn rouge_f(variant: RougeVariant, candidate: &str, reference: &str) -> f64 {
    match variant {
        RougeVariant::L => rouge_l_f(candidate, reference),
        RougeVariant::One => rouge_n_f(1, candidate, reference),
        RougeVariant::Two => rouge_n_f(2, candidate, reference),
    }
}

fn rouge_n_f(n: usize, candidate: &str, reference: &str) -> f64 {
    let c = rouge_tokens(candidate);
    let r = rouge_tokens(reference);
    let (cg, rg) = (ngram_counts(&c, n), ngram_counts(&r, n));
    let overlap = cg
        .iter()
        .map(|(g, &count)| count.min(rg.get(g).copied().unwrap_or(0)))
        .sum();
    f_measure(overlap, c.len().saturating_sub(n - 1), r.len().saturating_sub(n - 1))
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for g in tokens.windows(n) {
        *counts.entry(g).or_insert(0) += 1;
    }
    counts
}

fn f_measure(overlap: usize, candidate_len: usize, reference_len: usize) -> f64 {
    if overlap == 0 || candidate_len == 0 || reference_len == 0 {
        return 0.0;
    }
    let p = overlap as f64 / candidate_len as f64;
    let r = overlap as f64 / reference_len as f64;
    2.0 * p * r / (p + r)
}

/// Length of the longest common subsequence, two-row dynamic program.
pub(crate) fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
