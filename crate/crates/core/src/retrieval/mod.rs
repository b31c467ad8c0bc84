//! Dense retrieval over a granular index and context assembly.

mod context;
mod embed;
mod generate;
mod store;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::granularity::{rank_parents, score_parents, top_k_parents, GranularIndex, ScoredParent};
use crate::segmentation::Corpus;

pub use context::{assemble_context, AssembledContext, DEFAULT_CONTEXT_CAP};
pub use embed::{embed, EmbeddingProvider, EmbeddingProviderSpec, HashEmbedder, HttpEmbeddingProvider};
pub use generate::{qa_prompt, ExtractiveMockGenerator, GenerationProviderSpec, Generator, HttpGenerator};
pub use store::{cosine, VectorStore};

/// Embeds every retrieval unit of `index` into a normalized store.
pub fn embed_index<P: EmbeddingProvider + ?Sized>(
    index: &GranularIndex,
    corpus: &Corpus,
    provider: &P,
    batch_size: usize,
) -> Result<VectorStore> {
    let mut store = VectorStore::new(provider.dimension(), true);
    let units = index.units();
    if units.is_empty() {
        return Ok(store);
    }
    let texts = units
        .iter()
        .map(|u| Ok(corpus.get(&u.doc_id)?.chunk_text(u)))
        .collect::<Result<Vec<&str>>>()?;
    for (unit, vector) in units.iter().zip(embed(provider, &texts, batch_size)?) {
        store.insert(unit.chunk_id.clone(), vector)?;
    }
    Ok(store)
}

/// Query-side embedding with an optional instruction prefix.
pub fn embed_query<P: EmbeddingProvider + ?Sized>(
    provider: &P,
    query: &str,
    query_prefix: Option<&str>,
) -> Result<Vec<f64>> {
    let text = match query_prefix {
        Some(prefix) => format!("{prefix}{query}"),
        None => query.to_string(),
    };
    Ok(embed(provider, &[text.as_str()], 1)?.remove(0))
}

/// Cosine similarity of `query` to every unit of `index`.
pub fn unit_scores(query: &[f64], index: &GranularIndex, store: &VectorStore) -> Result<HashMap<String, f64>> {
    index
        .parents
        .iter()
        .chain(&index.children)
        .map(|unit| {
            let vector = store
                .get(&unit.chunk_id)
                .ok_or_else(|| Error::IncompleteScores(unit.chunk_id.clone()))?;
            Ok((unit.chunk_id.clone(), cosine(query, vector)?))
        })
        .collect()
}

/// Every parent of `index`, best first, for an already embedded query.
pub fn rank_with_vector(query: &[f64], index: &GranularIndex, store: &VectorStore) -> Result<Vec<ScoredParent>> {
    let scores = unit_scores(query, index, store)?;
    Ok(rank_parents(&score_parents(index, &scores)?))
}

/// Options shared by the query-side calls.
#[derive(Debug, Clone, Default)]
pub struct QueryOptions {
    pub query_prefix: Option<String>,
}

/// The `k` best parents for `query`.
pub fn retrieve<P: EmbeddingProvider + ?Sized>(
    query: &str,
    index: &GranularIndex,
    store: &VectorStore,
    provider: &P,
    k: usize,
    options: &QueryOptions,
) -> Result<Vec<ScoredParent>> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let vector = embed_query(provider, query, options.query_prefix.as_deref())?;
    let scores = unit_scores(&vector, index, store)?;
    top_k_parents(&score_parents(index, &scores)?, k)
}
