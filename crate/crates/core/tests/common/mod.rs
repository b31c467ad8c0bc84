#![allow(dead_code)]

use lgmgc::segmentation::{Chunk, Corpus, Document, SegmentedDoc};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const WORDS: &[&str] = &[
    "river", "stone", "lamp", "harbor", "glass", "winter", "keeper", "bell", "honey", "wheel", "flour", "furnace",
    "dome", "star", "valley", "ledger", "storm", "north", "copper", "bread", "quiet", "rope", "salt", "island",
    "mill", "tower", "smoke", "field", "lantern", "orchard", "market", "signal", "harvest", "thread", "anchor",
];

fn sentence(rng: &mut ChaCha8Rng, words: usize) -> String {
    let mut s: Vec<String> = (0..words).map(|_| WORDS.choose(rng).unwrap().to_string()).collect();
    let first = &mut s[0];
    *first = first[..1].to_uppercase() + &first[1..];
    let end = [".", ".", ".", "!", "?"].choose(rng).unwrap();
    s.join(" ") + end
}

/// Synthetic prose: paragraphs of sentences with a heavy-tailed length
/// distribution, occasional single line breaks and an occasional
/// sentence far longer than any chunk budget.
pub fn synthetic_text(rng: &mut ChaCha8Rng, target_words: usize) -> String {
    let mut out = String::new();
    let mut total = 0;
    while total < target_words {
        if !out.is_empty() {
            out.push_str("\n\n");
        }
        let sentences = rng.gen_range(1..12);
        for i in 0..sentences {
            let len = match rng.gen_range(0..100) {
                0 => rng.gen_range(400..900),
                1..=9 => rng.gen_range(40..120),
                _ => rng.gen_range(3..30),
            };
            if i > 0 {
                out.push_str(if rng.gen_bool(0.1) { "\n" } else { " " });
            }
            out.push_str(&sentence(rng, len));
            total += len;
        }
    }
    out
}

pub fn synthetic_doc(rng: &mut ChaCha8Rng, id: &str, target_words: usize) -> SegmentedDoc {
    SegmentedDoc::new(Document::new(id, synthetic_text(rng, target_words))).unwrap()
}

pub fn mini_corpus() -> Corpus {
    let docs = lgmgc::pipeline::ingest_corpus(std::path::Path::new(&fixture("mini_corpus.jsonl"))).unwrap();
    Corpus::new(docs).unwrap()
}

pub fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Checks reconstruction, sentence integrity, disjointness and an optional
/// size bound (single sentences are exempt from the bound).
pub fn check_chunks(doc: &SegmentedDoc, chunks: &[Chunk], bound: Option<usize>) -> Result<(), String> {
    let sentences = doc.sentences();
    let mut next = 0;
    for chunk in chunks {
        let range = doc
            .sentence_range(chunk)
            .ok_or_else(|| format!("{} is not sentence aligned", chunk.chunk_id))?;
        if range.start != next {
            return Err(format!("{} starts at sentence {} but {} was expected", chunk.chunk_id, range.start, next));
        }
        if chunk.word_count != doc.words(range.clone()) {
            return Err(format!("{} has a wrong word count", chunk.chunk_id));
        }
        if let Some(bound) = bound {
            if range.len() > 1 && chunk.word_count > bound {
                return Err(format!("{} has {} words, bound {bound}", chunk.chunk_id, chunk.word_count));
            }
        }
        next = range.end;
    }
    if next != sentences.len() {
        return Err(format!("chunks cover {next} of {} sentences", sentences.len()));
    }
    let rebuilt: String = chunks
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let gap_end = chunks.get(i + 1).map_or(doc.char_len(), |n| n.start);
            doc.slice(c.start, gap_end)
        })
        .collect();
    let lead = doc.slice(0, chunks.first().map_or(0, |c| c.start));
    if lead.trim() != "" || format!("{lead}{rebuilt}") != doc.text() {
        return Err("chunks plus gaps do not rebuild the text".into());
    }
    Ok(())
}
