//! Versioned JSON files for chunk indexes and vector stores.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{ChunkerKind, PipelineConfig};
use crate::error::{Error, Result};
use crate::granularity::GranularIndex;
use crate::retrieval::VectorStore;
use crate::segmentation::{Chunk, Corpus, Document, Separator};

pub const SCHEMA_VERSION: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn prompt_hash(prompt: &str) -> String {
    sha256_hex(prompt.as_bytes())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexConfigEcho {
    pub chunker: ChunkerKind,
    pub theta: usize,
    pub hierarchy: Vec<Separator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_threshold: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_hash: Option<String>,
}

impl IndexConfigEcho {
    pub fn from_config(cfg: &PipelineConfig) -> Self {
        let lg = cfg.chunker.uses_logits().then(|| cfg.lg_config());
        Self {
            chunker: cfg.chunker,
            theta: cfg.theta,
            hierarchy: cfg.hierarchy.clone(),
            stop_threshold: lg.as_ref().map(|l| l.stop_threshold),
            window_cap: lg.as_ref().map(|l| l.window_cap),
            prompt_hash: lg.as_ref().map(|l| prompt_hash(&l.prompt)),
        }
    }
}

/// On-disk chunk index: the documents, every chunk, and the child links.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexFile {
    pub schema_version: u32,
    pub config: IndexConfigEcho,
    pub documents: Vec<Document>,
    pub parents: Vec<Chunk>,
    pub children: Vec<Chunk>,
    pub parent_of: BTreeMap<String, String>,
}

impl IndexFile {
    pub fn new(config: IndexConfigEcho, corpus: &Corpus, index: GranularIndex) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config,
            documents: corpus.docs().iter().map(|d| d.document().clone()).collect(),
            parents: index.parents,
            children: index.children,
            parent_of: index.parent_of,
        }
    }

    pub fn index(&self) -> GranularIndex {
        GranularIndex {
            parents: self.parents.clone(),
            children: self.children.clone(),
            parent_of: self.parent_of.clone(),
        }
    }

    pub fn corpus(&self) -> Result<Corpus> {
        Corpus::new(self.documents.clone())
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("index serializes");
        out.push('\n');
        out
    }

    /// Writes the file and returns the hash of the bytes written.
    pub fn write(&self, path: &Path) -> Result<String> {
        let json = self.to_json();
        write_file(path, &json)?;
        Ok(sha256_hex(json.as_bytes()))
    }

    /// Reads the file and returns it with the hash of its bytes.
    pub fn read(path: &Path) -> Result<(Self, String)> {
        let raw = read_file(path)?;
        let file: Self = parse(path, &raw)?;
        check_schema(file.schema_version)?;
        Ok((file, sha256_hex(raw.as_bytes())))
    }
}

/// On-disk vector store, pinned to the index it was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreFile {
    pub schema_version: u32,
    pub index_hash: String,
    #[serde(flatten)]
    pub store: VectorStore,
}

impl StoreFile {
    pub fn new(index_hash: String, store: VectorStore) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            index_hash,
            store,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut json = serde_json::to_string(self).expect("store serializes");
        json.push('\n');
        write_file(path, &json)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file: Self = parse(path, &read_file(path)?)?;
        check_schema(file.schema_version)?;
        file.store.validate()?;
        Ok(file)
    }

    /// Fails unless this store was built from the index with hash `index_hash`.
    pub fn check_pairing(&self, index_hash: &str) -> Result<()> {
        if self.index_hash != index_hash {
            return Err(Error::StaleVectorStore {
                expected: self.index_hash.clone(),
                actual: index_hash.to_string(),
            });
        }
        Ok(())
    }
}

fn check_schema(version: u32) -> Result<()> {
    if version != SCHEMA_VERSION {
        return Err(Error::UnsupportedSchema(version));
    }
    Ok(())
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn parse<T: DeserializeOwned>(path: &Path, raw: &str) -> Result<T> {
    serde_json::from_str(raw).map_err(|e| Error::json(format!("parsing {}", path.display()), e))
}
