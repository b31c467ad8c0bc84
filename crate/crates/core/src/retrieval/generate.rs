use std::collections::HashSet;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ProviderError, Result};
use crate::http::JsonClient;
use crate::segmentation::split_sentences;
use crate::text;

const CONTEXT_MARKER: &str = "Context:\n";
const QUESTION_MARKER: &str = "\n\nQuestion: ";
const ANSWER_MARKER: &str = "\nAnswer:";

/// Answer synthesizer. Decoding strategy is the provider's concern.
pub trait Generator: Send + Sync {
    fn generate(&self, prompt: &str, max_words: usize) -> Result<String, ProviderError>;
}

impl<G: Generator + ?Sized> Generator for &G {
    fn generate(&self, prompt: &str, max_words: usize) -> Result<String, ProviderError> {
        (**self).generate(prompt, max_words)
    }
}

impl<G: Generator + ?Sized> Generator for Box<G> {
    fn generate(&self, prompt: &str, max_words: usize) -> Result<String, ProviderError> {
        (**self).generate(prompt, max_words)
    }
}

/// Prompt with the retrieved context placed before the question.
pub fn qa_prompt(context: &str, question: &str) -> String {
    format!(
        "Answer the question based on the context below. Only give the answer, without any other words.\n\n\
         {CONTEXT_MARKER}{context}{QUESTION_MARKER}{question}{ANSWER_MARKER}"
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationProviderSpec {
    pub endpoint: String,
    pub timeout_secs: f64,
    pub max_retries: u32,
    pub max_words: usize,
}

impl Default for GenerationProviderSpec {
    fn default() -> Self {
        Self {
            endpoint: "http://127.0.0.1:8082".into(),
            timeout_secs: 120.0,
            max_retries: 2,
            max_words: 64,
        }
    }
}

#[derive(Serialize)]
struct GenerateRequest<'a> {
    prompt: &'a str,
    max_words: usize,
}

#[derive(Deserialize)]
struct GenerateResponse {
    text: String,
}

/// Client for `POST /v1/generate`.
#[derive(Debug, Clone)]
pub struct HttpGenerator {
    client: JsonClient,
}

impl HttpGenerator {
    pub fn new(spec: &GenerationProviderSpec) -> Result<Self> {
        if spec.timeout_secs.is_nan() || spec.timeout_secs <= 0.0 {
            return Err(Error::InvalidConfig("generation timeout must be positive".into()));
        }
        Ok(Self {
            client: JsonClient::new(
                &spec.endpoint,
                Duration::from_secs_f64(spec.timeout_secs),
                spec.max_retries,
            )?,
        })
    }
}

impl Generator for HttpGenerator {
    fn generate(&self, prompt: &str, max_words: usize) -> Result<String, ProviderError> {
        let response: GenerateResponse = self.client.post("/v1/generate", &GenerateRequest { prompt, max_words })?;
        Ok(response.text)
    }
}

/// Offline generator that answers with the context sentence sharing the
/// most distinct words with the question (earliest on ties).
#[derive(Debug, Clone, Copy, Default)]
pub struct ExtractiveMockGenerator;

impl Generator for ExtractiveMockGenerator {
    fn generate(&self, prompt: &str, max_words: usize) -> Result<String, ProviderError> {
        let (context, question) = match (prompt.find(CONTEXT_MARKER), prompt.rfind(QUESTION_MARKER)) {
            (Some(c), Some(q)) if c + CONTEXT_MARKER.len() <= q => {
                let question = &prompt[q + QUESTION_MARKER.len()..];
                (
                    &prompt[c + CONTEXT_MARKER.len()..q],
                    question.strip_suffix(ANSWER_MARKER).unwrap_or(question),
                )
            }
            _ => (prompt, prompt),
        };
        let wanted: HashSet<String> = words(question).collect();
        let Ok(spans) = split_sentences(context) else {
            return Ok(String::new());
        };
        let mut best: Option<(usize, String)> = None;
        for span in spans {
            let sentence: String = context.chars().skip(span.start).take(span.end - span.start).collect();
            let overlap = words(&sentence).collect::<HashSet<_>>().intersection(&wanted).count();
            if best.as_ref().is_none_or(|(top, _)| overlap > *top) {
                best = Some((overlap, sentence));
            }
        }
        let answer = best.map(|(_, s)| s).unwrap_or_default();
        Ok(text::truncate_words(&answer, max_words).to_string())
    }
}

fn words(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mock_picks_overlapping_sentence() {
        let prompt = qa_prompt(
            "The sky was grey. Marta kept bees behind the mill. Nobody came.",
            "Who kept bees?",
        );
        let answer = ExtractiveMockGenerator.generate(&prompt, 64).unwrap();
        assert_eq!(answer, "Marta kept bees behind the mill.");
        assert_eq!(ExtractiveMockGenerator.generate(&prompt, 2).unwrap(), "Marta kept");
    }

    #[test]
    fn prompt_places_context_first() {
        let p = qa_prompt("CTX", "Q?");
        assert!(p.find("CTX").unwrap() < p.find("Q?").unwrap());
        assert!(p.ends_with("Answer:"));
    }
}
