use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ProviderError, Result};
use crate::http::JsonClient;
use crate::text;

/// Dense text encoder.
pub trait EmbeddingProvider: Send + Sync {
    fn dimension(&self) -> usize;
    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, ProviderError>;
}

impl<P: EmbeddingProvider + ?Sized> EmbeddingProvider for &P {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, ProviderError> {
        (**self).embed(texts)
    }
}

impl<P: EmbeddingProvider + ?Sized> EmbeddingProvider for Box<P> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, ProviderError> {
        (**self).embed(texts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbeddingProviderSpec {
    pub endpoint: String,
    pub dimension: usize,
    pub timeout_secs: f64,
    pub max_retries: u32,
    pub batch_size: usize,
    /// Prepended to queries (not to chunks) for retrievers trained with instructions.
    pub query_prefix: Option<String>,
}

impl Default for EmbeddingProviderSpec {
    fn default() -> Self {
        Self {
            endpoint: "http://127.0.0.1:8081".into(),
            dimension: 1024,
            timeout_secs: 60.0,
            max_retries: 2,
            batch_size: 32,
            query_prefix: None,
        }
    }
}

impl EmbeddingProviderSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidConfig("embedding dimension must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("embedding batch size must be at least 1".into()));
        }
        if self.timeout_secs.is_nan() || self.timeout_secs <= 0.0 {
            return Err(Error::InvalidConfig("embedding timeout must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    texts: &'a [&'a str],
}

#[derive(Deserialize)]
struct EmbedResponse {
    vectors: Vec<Vec<f64>>,
}

/// Client for `POST /v1/embed`.
#[derive(Debug, Clone)]
pub struct HttpEmbeddingProvider {
    client: JsonClient,
    dimension: usize,
}

impl HttpEmbeddingProvider {
    pub fn new(spec: &EmbeddingProviderSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            client: JsonClient::new(
                &spec.endpoint,
                Duration::from_secs_f64(spec.timeout_secs),
                spec.max_retries,
            )?,
            dimension: spec.dimension,
        })
    }
}

impl EmbeddingProvider for HttpEmbeddingProvider {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, ProviderError> {
        let response: EmbedResponse = self.client.post("/v1/embed", &EmbedRequest { texts })?;
        Ok(response.vectors)
    }
}

/// Offline embedder: word unigrams hashed into `dimension` buckets, L2-normalized.
///
/// Tokens are lowercased whitespace-delimited words with surrounding
/// punctuation trimmed; each adds 1 to bucket `fnv1a64(token) % dimension`.
#[derive(Debug, Clone, Copy)]
pub struct HashEmbedder {
    dimension: usize,
}

impl HashEmbedder {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension > 0, "dimension must be positive");
        Self { dimension }
    }

    pub fn vector(&self, text: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.dimension];
        for token in hash_tokens(text) {
            v[(text::fnv1a64(token.as_bytes()) % self.dimension as u64) as usize] += 1.0;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}

impl EmbeddingProvider for HashEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, ProviderError> {
        Ok(texts.iter().map(|t| self.vector(t)).collect())
    }
}

pub(crate) fn hash_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split_whitespace().map(|raw| {
        let lower = raw.to_lowercase();
        let trimmed = lower.trim_matches(|c: char| !c.is_alphanumeric());
        if trimmed.is_empty() {
            lower.clone()
        } else {
            trimmed.to_string()
        }
    })
}

/// Embeds `texts` in batches of `batch_size`, checking count and dimension of every reply.
pub fn embed<P: EmbeddingProvider + ?Sized>(
    provider: &P,
    texts: &[&str],
    batch_size: usize,
) -> Result<Vec<Vec<f64>>> {
    if texts.is_empty() {
        return Err(Error::EmptyInput);
    }
    if batch_size == 0 {
        return Err(Error::InvalidConfig("batch size must be at least 1".into()));
    }
    let dimension = provider.dimension();
    let batches: Vec<Vec<Vec<f64>>> = texts
        .par_chunks(batch_size)
        .map(|batch| {
            let vectors = provider.embed(batch)?;
            if vectors.len() != batch.len() {
                return Err(ProviderError::Protocol(format!(
                    "sent {} texts, received {} vectors",
                    batch.len(),
                    vectors.len()
                )));
            }
            if let Some(bad) = vectors.iter().find(|v| v.len() != dimension) {
                return Err(ProviderError::Protocol(format!(
                    "expected dimension {dimension}, received {}",
                    bad.len()
                )));
            }
            Ok(vectors)
        })
        .collect::<Result<_, ProviderError>>()?;
    Ok(batches.into_iter().flatten().collect())
}
