//! Talks to real model servers. Each endpoint is read from the environment:
//!
//!   LGMGC_LOGITS_URL   POST /v1/eos_score  {"prompt", "texts"}   -> {"scores"}
//!   LGMGC_EMBED_URL    POST /v1/embed      {"texts"}             -> {"vectors"}
//!   LGMGC_GENERATE_URL POST /v1/generate   {"prompt", "max_words"} -> {"text"}
//!
//! Unset variables are skipped.

use lgmgc::logits::{eos_scores, HttpLogitsProvider, LogitsProviderSpec};
use lgmgc::retrieval::{
    embed, qa_prompt, EmbeddingProviderSpec, GenerationProviderSpec, Generator, HttpEmbeddingProvider, HttpGenerator,
};

fn main() -> lgmgc::Result<()> {
    let prefixes = ["The bell cracked in 1902.", "The bell cracked in 1902. It was recast in Boston."];

    if let Ok(endpoint) = std::env::var("LGMGC_LOGITS_URL") {
        let spec = LogitsProviderSpec { endpoint, ..Default::default() };
        let provider = HttpLogitsProvider::new(&spec)?;
        for c in eos_scores(&provider, &spec.prompt_rho, &prefixes)? {
            println!("prefix {} -> log P(EOS) = {:.4}", c.sentence_index, c.eos_score);
        }
    }

    if let Ok(endpoint) = std::env::var("LGMGC_EMBED_URL") {
        let spec = EmbeddingProviderSpec { endpoint, ..Default::default() };
        let vectors = embed(&HttpEmbeddingProvider::new(&spec)?, &prefixes, spec.batch_size)?;
        println!("{} vectors of dimension {}", vectors.len(), vectors[0].len());
    }

    if let Ok(endpoint) = std::env::var("LGMGC_GENERATE_URL") {
        let spec = GenerationProviderSpec { endpoint, ..Default::default() };
        let answer = HttpGenerator::new(&spec)?.generate(&qa_prompt(prefixes[1], "Where was the bell recast?"), spec.max_words)?;
        println!("answer: {answer}");
    }

    println!("\nequivalent config section:\n{}", lgmgc::pipeline::PipelineConfig::default().to_toml());
    Ok(())
}
