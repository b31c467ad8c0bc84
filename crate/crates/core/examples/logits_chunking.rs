//! Logits-guided chunking with an offline scorer.
//!
//! `MockLogitsProvider::from_fn` stands in for a language model: here a
//! prefix scores higher the more it ends on a sentence about the same
//! subject as the first one, which is enough to see windows cut at topic shifts.

use lgmgc::logits::{logits_chunk, LGConfig, MockLogitsProvider};
use lgmgc::segmentation::{Document, SegmentedDoc};

const TEXT: &str = "Bees cluster in winter. Bees shiver to stay warm. Bees eat stored honey. \
The furnace runs all night. Glass is gathered on a pipe. The pipe keeps turning. \
Bees fly again in spring. Bees find the willows first.";

fn main() -> lgmgc::Result<()> {
    let doc = SegmentedDoc::new(Document::new("mixed", TEXT))?;
    let provider = MockLogitsProvider::from_fn(|prefix| {
        let last = prefix.rsplit(". ").next().unwrap_or(prefix);
        let same_topic = last.starts_with("Bees") == prefix.starts_with("Bees");
        (if same_topic { -1.0 } else { -6.0 }) + prefix.len() as f64 * 1e-3
    });

    let cfg = LGConfig {
        stop_threshold: 4,
        ..LGConfig::new(12)
    };
    for chunk in logits_chunk(&doc, &cfg, &provider)? {
        println!("{:>2} words | {}", chunk.word_count, doc.chunk_text(&chunk));
    }
    println!("\n{} provider calls, {} prefixes scored", provider.calls(), provider.texts_scored());
    Ok(())
}
