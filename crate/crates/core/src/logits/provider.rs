use std::collections::VecDeque;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ProviderError, Result};
use crate::http::JsonClient;
use crate::text;

/// Instruction placed before every scored prefix unless configured otherwise.
pub const DEFAULT_PROMPT: &str = "Continue writing the following text.";

/// Source of end-of-sequence log-probabilities.
///
/// `eos_scores(prompt, texts)[i]` is the score of the model's EOS token
/// immediately after `prompt` followed by `texts[i]`. Any strictly
/// increasing transform of the probability is acceptable.
pub trait LogitsProvider: Send + Sync {
    fn eos_scores(&self, prompt: &str, texts: &[&str]) -> Result<Vec<f64>, ProviderError>;
}

impl<P: LogitsProvider + ?Sized> LogitsProvider for &P {
    fn eos_scores(&self, prompt: &str, texts: &[&str]) -> Result<Vec<f64>, ProviderError> {
        (**self).eos_scores(prompt, texts)
    }
}

impl<P: LogitsProvider + ?Sized> LogitsProvider for Box<P> {
    fn eos_scores(&self, prompt: &str, texts: &[&str]) -> Result<Vec<f64>, ProviderError> {
        (**self).eos_scores(prompt, texts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogitsProviderSpec {
    pub endpoint: String,
    pub prompt_rho: String,
    pub eos_token_label: String,
    pub timeout_secs: f64,
    pub max_retries: u32,
}

impl Default for LogitsProviderSpec {
    fn default() -> Self {
        Self {
            endpoint: "http://127.0.0.1:8080".into(),
            prompt_rho: DEFAULT_PROMPT.into(),
            eos_token_label: "<|end_of_text|>".into(),
            timeout_secs: 60.0,
            max_retries: 2,
        }
    }
}

impl LogitsProviderSpec {
    pub fn validate(&self) -> Result<()> {
        if self.prompt_rho.trim().is_empty() {
            return Err(Error::InvalidConfig("logits prompt must not be empty".into()));
        }
        if self.timeout_secs.is_nan() || self.timeout_secs <= 0.0 {
            return Err(Error::InvalidConfig("logits timeout must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct EosRequest<'a> {
    prompt: &'a str,
    texts: &'a [&'a str],
}

#[derive(Deserialize)]
struct EosResponse {
    scores: Vec<f64>,
}

/// Client for `POST /v1/eos_score`.
#[derive(Debug, Clone)]
pub struct HttpLogitsProvider {
    client: JsonClient,
}

impl HttpLogitsProvider {
    pub fn new(spec: &LogitsProviderSpec) -> Result<Self> {
        spec.validate()?;
        let mut client = JsonClient::new(
            &spec.endpoint,
            Duration::from_secs_f64(spec.timeout_secs),
            spec.max_retries,
        )?;
        if !spec.eos_token_label.is_empty() {
            client = client.with_header("x-eos-token", spec.eos_token_label.clone());
        }
        Ok(Self { client })
    }
}

impl LogitsProvider for HttpLogitsProvider {
    fn eos_scores(&self, prompt: &str, texts: &[&str]) -> Result<Vec<f64>, ProviderError> {
        let response: EosResponse = self.client.post("/v1/eos_score", &EosRequest { prompt, texts })?;
        if response.scores.len() != texts.len() {
            return Err(ProviderError::Protocol(format!(
                "sent {} texts, received {} scores",
                texts.len(),
                response.scores.len()
            )));
        }
        Ok(response.scores)
    }
}

type ScoreRule = Box<dyn Fn(&str) -> f64 + Send + Sync>;

enum Script {
    Rule(ScoreRule),
    Replay(Mutex<VecDeque<Vec<f64>>>),
}

/// In-process provider driven by a scoring rule or a replay of score arrays.
///
/// Counts requests and scored texts so tests can check the call budget.
pub struct MockLogitsProvider {
    script: Script,
    calls: AtomicUsize,
    texts: AtomicUsize,
}

impl MockLogitsProvider {
    /// Scores every text independently with `rule`.
    pub fn from_fn(rule: impl Fn(&str) -> f64 + Send + Sync + 'static) -> Self {
        Self::with_script(Script::Rule(Box::new(rule)))
    }

    /// Answers the n-th request with the n-th array.
    pub fn replay(responses: Vec<Vec<f64>>) -> Self {
        Self::with_script(Script::Replay(Mutex::new(responses.into())))
    }

    /// Loads a replay file: a JSON list of score arrays.
    pub fn replay_file(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let responses: Vec<Vec<f64>> =
            serde_json::from_str(&raw).map_err(|e| Error::json(format!("parsing {}", path.display()), e))?;
        Ok(Self::replay(responses))
    }

    /// Deterministic pseudo-scores in `[-8, 0)` keyed on the last sentence
    /// of each prefix. Stands in for a language model in offline runs.
    pub fn hashed() -> Self {
        Self::from_fn(|text| {
            let tail = last_sentence(text);
            let h = text::fnv1a64(tail.as_bytes());
            -8.0 * ((h >> 11) as f64 / (1u64 << 53) as f64)
        })
    }

    /// Always prefers the shortest prefix.
    pub fn shortest_prefix() -> Self {
        Self::from_fn(|text| -(text::word_count(text) as f64))
    }

    fn with_script(script: Script) -> Self {
        Self {
            script,
            calls: AtomicUsize::new(0),
            texts: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn texts_scored(&self) -> usize {
        self.texts.load(Ordering::Relaxed)
    }
}

impl LogitsProvider for MockLogitsProvider {
    fn eos_scores(&self, _prompt: &str, texts: &[&str]) -> Result<Vec<f64>, ProviderError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.texts.fetch_add(texts.len(), Ordering::Relaxed);
        match &self.script {
            Script::Rule(rule) => Ok(texts.iter().map(|t| rule(t)).collect()),
            Script::Replay(queue) => {
                let scores = queue
                    .lock()
                    .unwrap()
                    .pop_front()
                    .ok_or_else(|| ProviderError::Protocol("replay script exhausted".into()))?;
                if scores.len() != texts.len() {
                    return Err(ProviderError::Protocol(format!(
                        "replay entry has {} scores for {} texts",
                        scores.len(),
                        texts.len()
                    )));
                }
                Ok(scores)
            }
        }
    }
}

fn last_sentence(text: &str) -> &str {
    let trimmed = text.trim_end();
    let body = trimmed.trim_end_matches(|c: char| !c.is_alphanumeric());
    let cut = body
        .rfind(['.', '!', '?', '\n'])
        .map_or(0, |i| i + 1);
    &trimmed[cut..]
}
