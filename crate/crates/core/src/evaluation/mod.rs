//! Retrieval and QA evaluation.
//!
//! Retrieval runs relabel each question's evidence to the best-matching
//! parent by ROUGE, rank all parents of the question's document, and report
//! DCG@k / Recall@k. QA runs assemble a context from the top parents, ask a
//! generator, and report bag-of-words F1.

mod qa;
mod ranking;
mod report;
mod rouge;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::granularity::{GranularIndex, ScoredParent};
use crate::retrieval::{
    assemble_context, embed, qa_prompt, rank_with_vector, EmbeddingProvider, Generator, VectorStore,
    DEFAULT_CONTEXT_CAP,
};
use crate::segmentation::{Chunk, Corpus};

pub use qa::{f1_single, normalize_answer, qa_f1};
pub use ranking::{dcg_at_k, recall_at_k};
pub use report::{render_f1_table, render_table, Cell, EvalReport, MetricRow, QueryResult};
pub use rouge::{rouge_f, rouge_l_f, rouge_tokens, RougeVariant};

/// Cutoffs reported by default.
pub const DEFAULT_K_LIST: [usize; 5] = [1, 2, 5, 10, 20];

/// A question whose answer is a sentence (or two) of one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalQAExample {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub question: String,
    pub evidence: String,
    pub doc_id: String,
}

/// A question with one or more reference answers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerQAExample {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub question: String,
    #[serde(rename = "answers")]
    pub gold_answers: Vec<String>,
    pub doc_id: String,
}

/// Id of the chunk whose text best matches `evidence` by ROUGE-L F; earliest on ties.
pub fn relabel_gold(evidence: &str, chunks: &[Chunk], corpus: &Corpus) -> Result<String> {
    relabel_gold_with(RougeVariant::L, evidence, chunks, corpus)
}

pub fn relabel_gold_with(
    variant: RougeVariant,
    evidence: &str,
    chunks: &[Chunk],
    corpus: &Corpus,
) -> Result<String> {
    let mut best: Option<(f64, &Chunk)> = None;
    for chunk in chunks {
        let score = rouge_f(variant, evidence, corpus.get(&chunk.doc_id)?.chunk_text(chunk));
        if best.is_none_or(|(top, _)| score > top) {
            best = Some((score, chunk));
        }
    }
    best.map(|(_, c)| c.chunk_id.clone()).ok_or(Error::EmptyInput)
}

#[derive(Debug, Clone)]
pub struct RetrievalEvalOptions {
    pub k_list: Vec<usize>,
    pub rouge: RougeVariant,
    pub batch_size: usize,
    pub query_prefix: Option<String>,
}

impl Default for RetrievalEvalOptions {
    fn default() -> Self {
        Self {
            k_list: DEFAULT_K_LIST.to_vec(),
            rouge: RougeVariant::L,
            batch_size: 32,
            query_prefix: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QaEvalOptions {
    pub k: usize,
    pub context_cap: usize,
    pub max_words: usize,
    pub batch_size: usize,
    pub query_prefix: Option<String>,
}

impl Default for QaEvalOptions {
    fn default() -> Self {
        Self {
            k: 5,
            context_cap: DEFAULT_CONTEXT_CAP,
            max_words: 64,
            batch_size: 32,
            query_prefix: None,
        }
    }
}

/// Splits the index by document so each question is ranked within its own document.
fn per_document(index: &GranularIndex, doc_ids: impl Iterator<Item = String>) -> HashMap<String, GranularIndex> {
    let mut out = HashMap::new();
    for id in doc_ids {
        if let std::collections::hash_map::Entry::Vacant(slot) = out.entry(id) {
            let sub = index.for_document(slot.key());
            slot.insert(sub);
        }
    }
    out
}

fn embed_questions<'a, P: EmbeddingProvider + ?Sized>(
    provider: &P,
    questions: impl Iterator<Item = &'a str>,
    prefix: Option<&str>,
    batch_size: usize,
) -> Result<Vec<Vec<f64>>> {
    let texts: Vec<String> = questions
        .map(|q| format!("{}{q}", prefix.unwrap_or("")))
        .collect();
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    embed(provider, &refs, batch_size)
}

fn query_id(explicit: &Option<String>, i: usize) -> String {
    explicit.clone().unwrap_or_else(|| format!("q{}", i + 1))
}

fn doc_ranking(
    doc_id: &str,
    vector: &[f64],
    by_doc: &HashMap<String, GranularIndex>,
    store: &VectorStore,
) -> Result<(Vec<ScoredParent>, Vec<Chunk>)> {
    let sub = &by_doc[doc_id];
    if sub.parents.is_empty() {
        return Err(Error::MissingDocument(doc_id.to_string()));
    }
    Ok((rank_with_vector(vector, sub, store)?, sub.parents.clone()))
}

/// Ranks of the relabeled gold parents, aggregated into DCG@k and Recall@k.
pub fn evaluate_retrieval<P: EmbeddingProvider + ?Sized>(
    examples: &[RetrievalQAExample],
    corpus: &Corpus,
    index: &GranularIndex,
    store: &VectorStore,
    provider: &P,
    options: &RetrievalEvalOptions,
    config: BTreeMap<String, String>,
) -> Result<EvalReport> {
    if examples.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    if options.k_list.contains(&0) {
        return Err(Error::InvalidK);
    }
    let by_doc = per_document(index, examples.iter().map(|e| e.doc_id.clone()));
    let vectors = embed_questions(
        provider,
        examples.iter().map(|e| e.question.as_str()),
        options.query_prefix.as_deref(),
        options.batch_size,
    )?;

    let per_query = examples
        .par_iter()
        .zip(&vectors)
        .enumerate()
        .map(|(i, (example, vector))| {
            let (ranking, parents) = doc_ranking(&example.doc_id, vector, &by_doc, store)?;
            let gold = relabel_gold_with(options.rouge, &example.evidence, &parents, corpus)?;
            let rank = ranking
                .iter()
                .position(|s| s.parent.chunk_id == gold)
                .map(|p| p + 1);
            Ok(QueryResult {
                query_id: query_id(&example.id, i),
                gold_chunk_id: Some(gold),
                rank,
                f1: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let ranks: Vec<Option<usize>> = per_query.iter().map(|q| q.rank).collect();
    let mut dcg_at = BTreeMap::new();
    let mut recall_at = BTreeMap::new();
    for &k in &options.k_list {
        dcg_at.insert(k, dcg_at_k(&ranks, k)?);
        recall_at.insert(k, recall_at_k(&ranks, k)?);
    }
    Ok(EvalReport {
        per_query,
        dcg_at,
        recall_at,
        f1_mean: None,
        config,
    })
}

/// End-to-end QA: retrieve, assemble context, generate, score with bag-of-words F1.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_qa<P, G>(
    examples: &[AnswerQAExample],
    corpus: &Corpus,
    index: &GranularIndex,
    store: &VectorStore,
    provider: &P,
    generator: &G,
    options: &QaEvalOptions,
    config: BTreeMap<String, String>,
) -> Result<EvalReport>
where
    P: EmbeddingProvider + ?Sized,
    G: Generator + ?Sized,
{
    if examples.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    if options.k == 0 {
        return Err(Error::InvalidK);
    }
    let by_doc = per_document(index, examples.iter().map(|e| e.doc_id.clone()));
    let vectors = embed_questions(
        provider,
        examples.iter().map(|e| e.question.as_str()),
        options.query_prefix.as_deref(),
        options.batch_size,
    )?;

    let per_query = examples
        .par_iter()
        .zip(&vectors)
        .enumerate()
        .map(|(i, (example, vector))| {
            let (mut ranking, _) = doc_ranking(&example.doc_id, vector, &by_doc, store)?;
            ranking.truncate(options.k);
            let context = assemble_context(&ranking, corpus, options.context_cap)?;
            let answer = generator.generate(&qa_prompt(&context.text, &example.question), options.max_words)?;
            Ok(QueryResult {
                query_id: query_id(&example.id, i),
                gold_chunk_id: None,
                rank: None,
                f1: Some(qa_f1(&answer, &example.gold_answers)),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let f1_sum: f64 = per_query.iter().filter_map(|q| q.f1).sum();
    Ok(EvalReport {
        f1_mean: Some(f1_sum / per_query.len() as f64 * 100.0),
        per_query,
        dcg_at: BTreeMap::new(),
        recall_at: BTreeMap::new(),
        config,
    })
}
