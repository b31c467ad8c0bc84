use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ChunkerKind, PipelineConfig};
use super::ingest::{ingest_corpus, load_dataset, Dataset};
use super::persist::{write_file, IndexConfigEcho, IndexFile, StoreFile};
use super::sweep::SweepReport;
use crate::error::{Error, Result};
use crate::evaluation::{
    evaluate_qa, evaluate_retrieval, render_f1_table, render_table, Cell, EvalReport, MetricRow, QaEvalOptions,
    RetrievalEvalOptions,
};
use crate::granularity::{build_index_with, GranularIndex, ScoredParent};
use crate::logits::{logits_chunk, HttpLogitsProvider, LogitsProvider, MockLogitsProvider};
use crate::retrieval::{
    assemble_context, embed_index, retrieve, AssembledContext, EmbeddingProvider, ExtractiveMockGenerator,
    Generator, HashEmbedder, HttpEmbeddingProvider, HttpGenerator, QueryOptions, VectorStore,
};
use crate::segmentation::{paragraph_chunk, recursive_chunk, ChunkLevel, Corpus, SentenceSplitter};

/// The three model providers a command may need.
pub struct Providers {
    pub logits: Box<dyn LogitsProvider>,
    pub embedder: Box<dyn EmbeddingProvider>,
    pub generator: Box<dyn Generator>,
    pub embed_batch: usize,
    pub query_prefix: Option<String>,
}

impl Providers {
    /// Mock providers when `cfg.mock` is set, HTTP clients otherwise.
    pub fn from_config(cfg: &PipelineConfig) -> Result<Self> {
        if cfg.mock {
            let logits: Box<dyn LogitsProvider> = match &cfg.paths.logits_replay {
                Some(path) => Box::new(MockLogitsProvider::replay_file(path)?),
                None => Box::new(MockLogitsProvider::hashed()),
            };
            return Ok(Self {
                logits,
                embedder: Box::new(HashEmbedder::new(cfg.mock_dimension)),
                generator: Box::new(ExtractiveMockGenerator),
                embed_batch: cfg.embedding.batch_size.max(1),
                query_prefix: None,
            });
        }
        Ok(Self {
            logits: Box::new(HttpLogitsProvider::new(&cfg.logits)?),
            embedder: Box::new(HttpEmbeddingProvider::new(&cfg.embedding)?),
            generator: Box::new(HttpGenerator::new(&cfg.generation)?),
            embed_batch: cfg.embedding.batch_size,
            query_prefix: cfg.embedding.query_prefix.clone(),
        })
    }
}

/// Runs `f` on a pool of `jobs` workers (0 = rayon default).
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn load_corpus(cfg: &PipelineConfig) -> Result<Corpus> {
    let docs = ingest_corpus(cfg.require(&cfg.paths.corpus, "corpus")?)?;
    match &cfg.paths.abbreviations {
        Some(path) => Corpus::with_splitter(docs, &SentenceSplitter::from_guard_file(path)?),
        None => Corpus::new(docs),
    }
}

/// Chunks every document with the configured chunker. Documents run in
/// parallel; the result is in corpus order.
pub fn chunk_corpus<L: LogitsProvider + ?Sized>(corpus: &Corpus, cfg: &PipelineConfig, logits: &L) -> Result<GranularIndex> {
    cfg.validate()?;
    let lg = cfg.lg_config();
    let per_doc = corpus
        .docs()
        .par_iter()
        .map(|doc| {
            let parents = match cfg.chunker {
                ChunkerKind::Paragraph => paragraph_chunk(doc),
                ChunkerKind::Recursive | ChunkerKind::Multigranular => {
                    recursive_chunk(doc, cfg.theta, &cfg.hierarchy)?
                }
                ChunkerKind::Logits | ChunkerKind::Lgmgc => logits_chunk(doc, &lg, logits)?,
            };
            if cfg.chunker.has_children() {
                build_index_with(doc, parents, cfg.theta, &cfg.hierarchy)
            } else {
                Ok(GranularIndex::parents_only(parents))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut index = GranularIndex::default();
    for part in per_doc {
        index.extend(part);
    }
    Ok(index)
}

/// Word-count distribution of one chunk level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelStats {
    pub count: usize,
    pub min_words: usize,
    pub mean_words: f64,
    pub max_words: usize,
}

impl LevelStats {
    fn of<'a>(chunks: impl Iterator<Item = &'a crate::segmentation::Chunk>) -> Option<Self> {
        let sizes: Vec<usize> = chunks.map(|c| c.word_count).collect();
        let count = sizes.len();
        (count > 0).then(|| Self {
            count,
            min_words: *sizes.iter().min().unwrap(),
            mean_words: sizes.iter().sum::<usize>() as f64 / count as f64,
            max_words: *sizes.iter().max().unwrap(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChunkSummary {
    pub chunker: ChunkerKind,
    pub theta: usize,
    pub documents: usize,
    pub levels: Vec<(ChunkLevel, LevelStats)>,
    pub index_path: Option<PathBuf>,
}

impl ChunkSummary {
    fn new(cfg: &PipelineConfig, corpus: &Corpus, index: &GranularIndex, index_path: Option<PathBuf>) -> Self {
        let levels = [ChunkLevel::Parent, ChunkLevel::ChildHalf, ChunkLevel::ChildQuarter]
            .into_iter()
            .filter_map(|level| {
                LevelStats::of(index.parents.iter().chain(&index.children).filter(|c| c.level == level))
                    .map(|s| (level, s))
            })
            .collect();
        Self {
            chunker: cfg.chunker,
            theta: cfg.theta,
            documents: corpus.len(),
            levels,
            index_path,
        }
    }
}

impl fmt::Display for ChunkSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} chunker, theta {}, {} documents", self.chunker, self.theta, self.documents)?;
        for (level, s) in &self.levels {
            writeln!(
                f,
                "  {:<13} {:>6} chunks  words min {} / mean {:.1} / max {}",
                level.as_str(),
                s.count,
                s.min_words,
                s.mean_words,
                s.max_words
            )?;
        }
        if let Some(path) = &self.index_path {
            writeln!(f, "  index written to {}", path.display())?;
        }
        Ok(())
    }
}

/// `chunk`: chunk the corpus and write the index file.
pub fn cmd_chunk(cfg: &PipelineConfig, providers: &Providers) -> Result<ChunkSummary> {
    cfg.validate()?;
    let index_path = cfg.require(&cfg.paths.index, "index")?;
    let corpus = load_corpus(cfg)?;
    let index = with_pool(cfg.jobs, || chunk_corpus(&corpus, cfg, providers.logits.as_ref()))??;
    let summary = ChunkSummary::new(cfg, &corpus, &index, Some(index_path.to_path_buf()));
    IndexFile::new(IndexConfigEcho::from_config(cfg), &corpus, index).write(index_path)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSummary {
    pub units: usize,
    pub dimension: usize,
    pub index_hash: String,
    pub store_path: PathBuf,
}

impl fmt::Display for IndexSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "embedded {} units ({} dims) into {}\n  index hash {}",
            self.units,
            self.dimension,
            self.store_path.display(),
            self.index_hash
        )
    }
}

/// `index`: embed every retrieval unit of the index file.
pub fn cmd_index(cfg: &PipelineConfig, providers: &Providers) -> Result<IndexSummary> {
    let index_path = cfg.require(&cfg.paths.index, "index")?;
    let store_path = cfg.require(&cfg.paths.store, "store")?;
    let (file, index_hash) = IndexFile::read(index_path)?;
    let corpus = file.corpus()?;
    let index = file.index();
    let store = with_pool(cfg.jobs, || {
        embed_index(&index, &corpus, providers.embedder.as_ref(), providers.embed_batch)
    })??;
    let summary = IndexSummary {
        units: store.len(),
        dimension: store.dimension(),
        index_hash: index_hash.clone(),
        store_path: store_path.to_path_buf(),
    };
    StoreFile::new(index_hash, store).write(store_path)?;
    Ok(summary)
}

/// Loads an index and its vector store, refusing a mismatched pair.
pub fn load_artifacts(index_path: &Path, store_path: &Path) -> Result<(Corpus, GranularIndex, VectorStore)> {
    let (file, index_hash) = IndexFile::read(index_path)?;
    let store = StoreFile::read(store_path)?;
    store.check_pairing(&index_hash)?;
    Ok((file.corpus()?, file.index(), store.store))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrieveOutput {
    pub question: String,
    pub ranking: Vec<ScoredParent>,
    pub context: AssembledContext,
}

impl fmt::Display for RetrieveOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "question: {}", self.question)?;
        for (i, p) in self.ranking.iter().enumerate() {
            writeln!(
                f,
                "{:>3}. {:.6}  {} ({} words, best unit {})",
                i + 1,
                p.score,
                p.parent.chunk_id,
                p.parent.word_count,
                p.best_unit
            )?;
        }
        writeln!(f, "\ncontext ({} words):\n{}", self.context.word_count, self.context.text)
    }
}

/// `retrieve`: top-k parents for `question` and the assembled context.
/// `doc_id` restricts the search to one document.
pub fn cmd_retrieve(
    cfg: &PipelineConfig,
    providers: &Providers,
    question: &str,
    doc_id: Option<&str>,
) -> Result<RetrieveOutput> {
    cfg.validate()?;
    let (corpus, index, store) = load_artifacts(
        cfg.require(&cfg.paths.index, "index")?,
        cfg.require(&cfg.paths.store, "store")?,
    )?;
    let index = match doc_id {
        Some(id) => {
            corpus.get(id)?;
            index.for_document(id)
        }
        None => index,
    };
    if index.parents.is_empty() {
        return Err(Error::EmptyRanking);
    }
    let options = QueryOptions {
        query_prefix: providers.query_prefix.clone(),
    };
    let ranking = retrieve(question, &index, &store, providers.embedder.as_ref(), cfg.k, &options)?;
    let context = assemble_context(&ranking, &corpus, cfg.context_cap)?;
    Ok(RetrieveOutput {
        question: question.to_string(),
        ranking,
        context,
    })
}

/// Chunks, embeds and evaluates in memory. Nothing is written.
pub fn evaluate_in_memory(
    cfg: &PipelineConfig,
    corpus: &Corpus,
    dataset: &Dataset,
    providers: &Providers,
) -> Result<EvalReport> {
    cfg.validate()?;
    with_pool(cfg.jobs, || {
        let index = chunk_corpus(corpus, cfg, providers.logits.as_ref())?;
        let store = embed_index(&index, corpus, providers.embedder.as_ref(), providers.embed_batch)?;
        match dataset {
            Dataset::Retrieval(examples) => evaluate_retrieval(
                examples,
                corpus,
                &index,
                &store,
                providers.embedder.as_ref(),
                &RetrievalEvalOptions {
                    k_list: cfg.k_list.clone(),
                    rouge: cfg.rouge,
                    batch_size: providers.embed_batch,
                    query_prefix: providers.query_prefix.clone(),
                },
                cfg.echo(),
            ),
            Dataset::Answers(examples) => evaluate_qa(
                examples,
                corpus,
                &index,
                &store,
                providers.embedder.as_ref(),
                providers.generator.as_ref(),
                &QaEvalOptions {
                    k: cfg.k,
                    context_cap: cfg.context_cap,
                    max_words: cfg.generation.max_words,
                    batch_size: providers.embed_batch,
                    query_prefix: providers.query_prefix.clone(),
                },
                cfg.echo(),
            ),
        }
    })?
}

/// Plain-text table for one report.
pub fn render_report(label: &str, report: &EvalReport) -> String {
    let mut out = String::new();
    if !report.dcg_at.is_empty() {
        out += &render_table(&[MetricRow::from_report(label, report)]);
    }
    if let Some(f1) = report.f1_mean {
        out += &render_f1_table(&[(label.to_string(), Cell::single(f1))]);
    }
    out
}

fn dataset_path<'a>(cfg: &'a PipelineConfig, dataset: Option<&'a Path>) -> Result<&'a Path> {
    match dataset {
        Some(p) => Ok(p),
        None => cfg.require(&cfg.paths.dataset, "dataset"),
    }
}

/// Writes `<report>` as JSON and `<report>.txt` as a table, when a report path is set.
fn write_outputs(cfg: &PipelineConfig, json: &str, table: &str) -> Result<()> {
    if let Some(path) = &cfg.paths.report {
        write_file(path, json)?;
        write_file(&path.with_extension("txt"), table)?;
    }
    Ok(())
}

/// `evaluate`: run the configured chunker over a question set.
pub fn cmd_evaluate(cfg: &PipelineConfig, providers: &Providers, dataset: Option<&Path>) -> Result<EvalReport> {
    cfg.validate()?;
    let dataset = load_dataset(dataset_path(cfg, dataset)?)?;
    let corpus = load_corpus(cfg)?;
    let report = evaluate_in_memory(cfg, &corpus, &dataset, providers)?;
    write_outputs(cfg, &report.to_json(), &render_report(cfg.chunker.as_str(), &report))?;
    Ok(report)
}

/// `sweep`: `evaluate` once per θ, then mean and sample standard deviation.
pub fn cmd_sweep(
    cfg: &PipelineConfig,
    providers: &Providers,
    dataset: Option<&Path>,
    thetas: &[usize],
) -> Result<SweepReport> {
    if thetas.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one theta".into()));
    }
    let dataset = load_dataset(dataset_path(cfg, dataset)?)?;
    let corpus = load_corpus(cfg)?;
    let runs = thetas
        .iter()
        .map(|&theta| {
            let run_cfg = PipelineConfig {
                theta,
                ..cfg.clone()
            };
            evaluate_in_memory(&run_cfg, &corpus, &dataset, providers)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut echo = cfg.echo();
    echo.remove("theta");
    echo.insert(
        "thetas".into(),
        thetas.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
    );
    let sweep = SweepReport::aggregate(thetas.to_vec(), runs, echo)?;
    write_outputs(cfg, &sweep.to_json(), &sweep.render(cfg.chunker.as_str()))?;
    Ok(sweep)
}
