//! Configuration, corpus ingestion, on-disk artifacts and the five commands.

mod commands;
mod config;
mod ingest;
mod persist;
mod sweep;

pub use commands::{
    chunk_corpus, cmd_chunk, cmd_evaluate, cmd_index, cmd_retrieve, cmd_sweep, evaluate_in_memory, load_artifacts,
    load_corpus, render_report, with_pool, ChunkSummary, IndexSummary, LevelStats, Providers, RetrieveOutput,
};
pub use config::{ChunkerKind, Paths, PipelineConfig};
pub use ingest::{ingest_corpus, load_dataset, normalize_text, Dataset};
pub use persist::{prompt_hash, sha256_hex, IndexConfigEcho, IndexFile, StoreFile, SCHEMA_VERSION};
pub use sweep::{mean_std, SweepReport};
