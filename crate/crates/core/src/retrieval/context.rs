use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::granularity::ScoredParent;
use crate::segmentation::Corpus;
use crate::text;

/// Words allowed in the synthesizer context unless configured otherwise.
pub const DEFAULT_CONTEXT_CAP: usize = 1500;

const SEPARATOR: &str = "\n\n";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssembledContext {
    pub text: String,
    pub used_parents: Vec<String>,
    pub word_count: usize,
}

/// Concatenates ranked parents until the next one would exceed `context_cap` words.
///
/// Parents are joined by a blank line; the separator does not count toward
/// the cap. A top parent that is larger than the cap on its own is cut at
/// its last sentence boundary within the cap (or, if its first sentence is
/// already too long, after `context_cap` words).
pub fn assemble_context(ranking: &[ScoredParent], corpus: &Corpus, context_cap: usize) -> Result<AssembledContext> {
    if context_cap == 0 {
        return Err(Error::InvalidConfig("context cap must be positive".into()));
    }
    let Some(top) = ranking.first() else {
        return Err(Error::EmptyRanking);
    };

    let mut parts: Vec<&str> = Vec::new();
    let mut used_parents = Vec::new();
    let mut word_count = 0;
    for scored in ranking {
        let parent = &scored.parent;
        if word_count + parent.word_count > context_cap {
            break;
        }
        parts.push(corpus.get(&parent.doc_id)?.chunk_text(parent));
        used_parents.push(parent.chunk_id.clone());
        word_count += parent.word_count;
    }

    if parts.is_empty() {
        let parent = &top.parent;
        let doc = corpus.get(&parent.doc_id)?;
        let sentences = doc
            .sentence_range(parent)
            .ok_or_else(|| Error::InvalidParent(parent.chunk_id.clone()))?;
        let fitting = (sentences.start..sentences.end)
            .take_while(|&i| doc.words(sentences.start..i + 1) <= context_cap)
            .last();
        let text = match fitting {
            Some(last) => {
                let (start, end) = doc.span_of(sentences.start..last + 1);
                doc.slice(start, end)
            }
            None => text::truncate_words(doc.chunk_text(parent), context_cap),
        };
        word_count = text::word_count(text);
        parts.push(text);
        used_parents.push(parent.chunk_id.clone());
    }

    Ok(AssembledContext {
        text: parts.join(SEPARATOR),
        used_parents,
        word_count,
    })
}
