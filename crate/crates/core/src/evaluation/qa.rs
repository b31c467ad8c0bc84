use std::collections::HashMap;

/// Lowercase, drop punctuation and the articles a/an/the, split on whitespace.
pub fn normalize_answer(text: &str) -> Vec<String> {
    let lowered: String = text
        .to_lowercase()
        .chars()
        .filter(|c| !is_punctuation(*c))
        .collect();
    lowered
        .split_whitespace()
        .filter(|w| !matches!(*w, "a" | "an" | "the"))
        .map(str::to_string)
        .collect()
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '‘' | '’' | '“' | '”' | '–' | '—' | '…' | '«' | '»' | '¿' | '¡' | '·'
        )
}

fn bag(tokens: Vec<String>) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for t in tokens {
        *counts.entry(t).or_insert(0) += 1;
    }
    counts
}

/// Bag-of-words F1 between one prediction and one reference.
///
/// Two empty bags are equal and score 1; one empty bag scores 0.
pub fn f1_single(pred: &str, gold: &str) -> f64 {
    let p = bag(normalize_answer(pred));
    let g = bag(normalize_answer(gold));
    let p_total: usize = p.values().sum();
    let g_total: usize = g.values().sum();
    if p_total == 0 || g_total == 0 {
        return if p_total == g_total { 1.0 } else { 0.0 };
    }
    let common: usize = p
        .iter()
        .map(|(w, &n)| n.min(g.get(w).copied().unwrap_or(0)))
        .sum();
    if common == 0 {
        return 0.0;
    }
    let precision = common as f64 / p_total as f64;
    let recall = common as f64 / g_total as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Best F1 of `pred` over the gold answers; 0 when there are none.
pub fn qa_f1(pred: &str, gold_answers: &[String]) -> f64 {
    gold_answers
        .iter()
        .map(|g| f1_single(pred, g))
        .fold(0.0, f64::max)
}
