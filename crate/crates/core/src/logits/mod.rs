//! Logits-guided chunking.
//!
//! The document is first cut into a stream of recursive chunks of `theta`
//! words. Each window (carried remainder plus the next stream chunk) is
//! scored at every sentence end by the probability that a language model
//! would stop writing there; the window is cut after the best-scoring
//! sentence and the rest is carried into the next window.

mod provider;

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segmentation::{recursive_ranges, Chunk, ChunkLevel, SegmentedDoc, Separator};

pub use provider::{
    HttpLogitsProvider, LogitsProvider, LogitsProviderSpec, MockLogitsProvider, DEFAULT_PROMPT,
};

/// EOS score of the prefix ending at sentence `sentence_index` (1-based) of a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakCandidate {
    pub sentence_index: usize,
    pub eos_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LGConfig {
    /// Size of each chunk in the feed stream, in words.
    pub theta: usize,
    /// A final window below this many words is emitted without scoring.
    pub stop_threshold: usize,
    /// Windows above this many words are cut at the last sentence that fits.
    pub window_cap: usize,
    pub prompt: String,
    pub hierarchy: Vec<Separator>,
}

impl LGConfig {
    /// Defaults: stop threshold `theta`, window cap `2 * theta`.
    pub fn new(theta: usize) -> Self {
        Self {
            theta,
            stop_threshold: theta,
            window_cap: 2 * theta,
            prompt: DEFAULT_PROMPT.to_string(),
            hierarchy: Separator::default_hierarchy(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let Self {
            theta,
            stop_threshold,
            window_cap,
            ..
        } = *self;
        if theta == 0 {
            return Err(Error::InvalidConfig("theta must be positive".into()));
        }
        if !(stop_threshold <= theta && theta <= window_cap && window_cap <= 2 * theta) {
            return Err(Error::InvalidConfig(format!(
                "need stop_threshold <= theta <= window_cap <= 2 * theta, got {stop_threshold}, {theta}, {window_cap}"
            )));
        }
        if self.prompt.trim().is_empty() {
            return Err(Error::InvalidConfig("prompt must not be empty".into()));
        }
        Ok(())
    }
}

/// Scores each prefix; `prefixes[k - 1]` must be the concatenation of sentences `1..=k`.
pub fn eos_scores<P: LogitsProvider + ?Sized>(
    provider: &P,
    prompt: &str,
    prefixes: &[&str],
) -> Result<Vec<BreakCandidate>> {
    if prefixes.is_empty() {
        return Err(Error::NoCandidates);
    }
    let scores = provider.eos_scores(prompt, prefixes)?;
    if scores.len() != prefixes.len() {
        return Err(crate::ProviderError::Protocol(format!(
            "expected {} scores, got {}",
            prefixes.len(),
            scores.len()
        ))
        .into());
    }
    scores
        .into_iter()
        .enumerate()
        .map(|(i, eos_score)| {
            if eos_score.is_finite() {
                Ok(BreakCandidate {
                    sentence_index: i + 1,
                    eos_score,
                })
            } else {
                Err(crate::ProviderError::Protocol(format!("score {eos_score} for prefix {}", i + 1)).into())
            }
        })
        .collect()
}

/// Index of the highest-scoring candidate; ties go to the later sentence.
pub fn select_break(candidates: &[BreakCandidate]) -> Result<usize> {
    candidates
        .iter()
        .reduce(|best, c| if c.eos_score >= best.eos_score { c } else { best })
        .map(|c| c.sentence_index)
        .ok_or(Error::NoCandidates)
}

/// Runs the logits-guided chunker over one document.
pub fn logits_chunk<P: LogitsProvider + ?Sized>(
    doc: &SegmentedDoc,
    cfg: &LGConfig,
    provider: &P,
) -> Result<Vec<Chunk>> {
    cfg.validate()?;
    let n = doc.sentences().len();
    let mut feed = recursive_ranges(doc, 0..n, cfg.theta, &cfg.hierarchy)
        .into_iter()
        .peekable();

    let mut chunks = Vec::new();
    let mut window = 0..0;
    loop {
        if let Some(next) = feed.next() {
            debug_assert_eq!(next.start, window.end);
            window.end = next.end;
        }
        if window.is_empty() {
            break;
        }
        let words = doc.words(window.clone());
        if feed.peek().is_none() && words < cfg.stop_threshold {
            chunks.push(doc.chunk(window.clone(), ChunkLevel::Parent));
            break;
        }

        let take = if words > cfg.window_cap {
            forced_break(doc, window.clone(), cfg.window_cap)
        } else {
            scored_break(doc, window.clone(), cfg, provider)?
        };
        let cut = window.start + take;
        chunks.push(doc.chunk(window.start..cut, ChunkLevel::Parent));
        window.start = cut;
    }
    Ok(chunks)
}

/// Logits-guided chunks used as parents of a multi-granular index.
pub fn lg_parent_chunks<P: LogitsProvider + ?Sized>(
    doc: &SegmentedDoc,
    cfg: &LGConfig,
    provider: &P,
) -> Result<Vec<Chunk>> {
    // logits_chunk already tags its output as parent level
    logits_chunk(doc, cfg, provider)
}

/// Longest sentence prefix within `cap` words, at least one sentence.
fn forced_break(doc: &SegmentedDoc, window: Range<usize>, cap: usize) -> usize {
    (2..=window.len())
        .take_while(|&k| doc.words(window.start..window.start + k) <= cap)
        .last()
        .unwrap_or(1)
}

fn scored_break<P: LogitsProvider + ?Sized>(
    doc: &SegmentedDoc,
    window: Range<usize>,
    cfg: &LGConfig,
    provider: &P,
) -> Result<usize> {
    if window.len() == 1 {
        return Ok(1);
    }
    let (start, _) = doc.span_of(window.clone());
    let prefixes: Vec<&str> = window
        .clone()
        .map(|i| doc.slice(start, doc.sentences()[i].end))
        .collect();
    let candidates = eos_scores(provider, &cfg.prompt, &prefixes).map_err(|e| match e {
        Error::Provider(source) => {
            let (s, t) = doc.span_of(window.clone());
            Error::Window {
                doc_id: doc.id().to_string(),
                window: format!("sentences {}..{} (chars {s}..{t})", window.start, window.end),
                source,
            }
        }
        other => other,
    })?;
    select_break(&candidates)
}
