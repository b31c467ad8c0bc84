use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{RougeVariant, DEFAULT_K_LIST};
use crate::logits::{LGConfig, LogitsProviderSpec};
use crate::retrieval::{EmbeddingProviderSpec, GenerationProviderSpec, DEFAULT_CONTEXT_CAP};
use crate::segmentation::Separator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChunkerKind {
    Recursive,
    Paragraph,
    Logits,
    Multigranular,
    Lgmgc,
}

impl ChunkerKind {
    pub const ALL: [ChunkerKind; 5] = [
        ChunkerKind::Recursive,
        ChunkerKind::Paragraph,
        ChunkerKind::Logits,
        ChunkerKind::Multigranular,
        ChunkerKind::Lgmgc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChunkerKind::Recursive => "recursive",
            ChunkerKind::Paragraph => "paragraph",
            ChunkerKind::Logits => "logits",
            ChunkerKind::Multigranular => "multigranular",
            ChunkerKind::Lgmgc => "lgmgc",
        }
    }

    pub fn uses_logits(self) -> bool {
        matches!(self, ChunkerKind::Logits | ChunkerKind::Lgmgc)
    }

    pub fn has_children(self) -> bool {
        matches!(self, ChunkerKind::Multigranular | ChunkerKind::Lgmgc)
    }
}

impl fmt::Display for ChunkerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChunkerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown chunker `{s}`")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Paths {
    pub corpus: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub store: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    /// Abbreviation guard list for the sentence splitter.
    pub abbreviations: Option<PathBuf>,
    /// Replay file for the mock logits provider (JSON list of score arrays).
    pub logits_replay: Option<PathBuf>,
}

/// Everything a command needs. Loaded from a TOML file; CLI flags override keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub chunker: ChunkerKind,
    pub theta: usize,
    pub k: usize,
    pub context_cap: usize,
    /// Defaults to `theta` when unset.
    pub stop_threshold: Option<usize>,
    /// Defaults to `2 * theta` when unset.
    pub window_cap: Option<usize>,
    pub hierarchy: Vec<Separator>,
    pub k_list: Vec<usize>,
    pub thetas: Vec<usize>,
    pub rouge: RougeVariant,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub mock: bool,
    pub mock_dimension: usize,
    /// Seed for the randomized test harnesses only.
    pub seed: u64,
    pub logits: LogitsProviderSpec,
    pub embedding: EmbeddingProviderSpec,
    pub generation: GenerationProviderSpec,
    pub paths: Paths,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            chunker: ChunkerKind::Lgmgc,
            theta: 300,
            k: 5,
            context_cap: DEFAULT_CONTEXT_CAP,
            stop_threshold: None,
            window_cap: None,
            hierarchy: Separator::default_hierarchy(),
            k_list: DEFAULT_K_LIST.to_vec(),
            thetas: vec![200, 300, 500],
            rouge: RougeVariant::L,
            jobs: 0,
            mock: false,
            mock_dimension: 256,
            seed: 0,
            logits: LogitsProviderSpec::default(),
            embedding: EmbeddingProviderSpec::default(),
            generation: GenerationProviderSpec::default(),
            paths: Paths::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(raw: &str) -> Result<Self> {
        toml::from_str(raw).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("reading {}: {e}", path.display())))?;
        Self::from_toml(&raw)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn lg_config(&self) -> LGConfig {
        LGConfig {
            theta: self.theta,
            stop_threshold: self.stop_threshold.unwrap_or(self.theta),
            window_cap: self.window_cap.unwrap_or(2 * self.theta),
            prompt: self.logits.prompt_rho.clone(),
            hierarchy: self.hierarchy.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta == 0 {
            return Err(Error::InvalidConfig("theta must be positive".into()));
        }
        if self.k == 0 || self.k_list.contains(&0) {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if self.context_cap < self.theta {
            return Err(Error::InvalidConfig(format!(
                "context_cap ({}) must be at least theta ({})",
                self.context_cap, self.theta
            )));
        }
        if self.hierarchy.is_empty() {
            return Err(Error::InvalidConfig("separator hierarchy must not be empty".into()));
        }
        if self.thetas.contains(&0) {
            return Err(Error::InvalidConfig("sweep thetas must be positive".into()));
        }
        if self.mock_dimension == 0 {
            return Err(Error::InvalidConfig("mock_dimension must be positive".into()));
        }
        if self.chunker.uses_logits() {
            self.lg_config().validate()?;
            if !self.mock {
                self.logits.validate()?;
            }
        }
        if !self.mock {
            self.embedding.validate()?;
        }
        Ok(())
    }

    /// Configuration echoed into reports and index files.
    pub fn echo(&self) -> std::collections::BTreeMap<String, String> {
        let mut echo = std::collections::BTreeMap::new();
        echo.insert("chunker".into(), self.chunker.to_string());
        echo.insert("theta".into(), self.theta.to_string());
        echo.insert("k".into(), self.k.to_string());
        echo.insert("context_cap".into(), self.context_cap.to_string());
        echo.insert("rouge".into(), self.rouge.as_str().to_string());
        echo.insert(
            "providers".into(),
            if self.mock { "mock".into() } else { "http".into() },
        );
        if self.chunker.uses_logits() {
            let lg = self.lg_config();
            echo.insert("stop_threshold".into(), lg.stop_threshold.to_string());
            echo.insert("window_cap".into(), lg.window_cap.to_string());
            echo.insert("prompt_hash".into(), super::persist::prompt_hash(&lg.prompt));
        }
        echo
    }

    pub(crate) fn require<'a>(&self, path: &'a Option<PathBuf>, what: &str) -> Result<&'a Path> {
        path.as_deref()
            .ok_or_else(|| Error::InvalidConfig(format!("no {what} path configured")))
    }
}
