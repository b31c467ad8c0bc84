use crate::error::{Error, Result};

fn check(ranks: &[Option<usize>], k: usize) -> Result<()> {
    if ranks.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    if k == 0 {
        return Err(Error::InvalidK);
    }
    Ok(())
}

/// Mean over queries of `gain(rank)` for ranks within the cutoff, times 100.
fn mean_gain(ranks: &[Option<usize>], k: usize, gain: impl Fn(usize) -> f64) -> f64 {
    let total: f64 = ranks
        .iter()
        .map(|r| match *r {
            Some(rank) if rank >= 1 && rank <= k => gain(rank),
            _ => 0.0,
        })
        .sum();
    total / ranks.len() as f64 * 100.0
}

/// DCG@k for one relevant chunk per query, averaged and scaled to 0..=100.
///
/// `ranks` holds the 1-based rank of each query's gold chunk, `None` when absent.
pub fn dcg_at_k(ranks: &[Option<usize>], k: usize) -> Result<f64> {
    check(ranks, k)?;
    Ok(mean_gain(ranks, k, |rank| 1.0 / ((rank + 1) as f64).log2()))
}

/// Percentage of queries whose gold chunk is ranked within `k`.
pub fn recall_at_k(ranks: &[Option<usize>], k: usize) -> Result<f64> {
    check(ranks, k)?;
    Ok(mean_gain(ranks, k, |_| 1.0))
}
