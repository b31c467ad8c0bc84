use lgmgc::granularity::{build_index, GranularIndex};
use lgmgc::logits::{lg_parent_chunks, LGConfig, MockLogitsProvider};
use lgmgc::retrieval::{assemble_context, embed_index, retrieve, HashEmbedder, QueryOptions};
use lgmgc::segmentation::{Corpus, Document};

fn main() -> lgmgc::Result<()> {
    let corpus = Corpus::new(vec![
        Document::new(
            "bees",
            "Marta kept forty hives. She marks each queen with paint. The colour tells the year. \
             Swarms settle on branches. Scouts dance to report a new home.",
        ),
        Document::new(
            "glass",
            "Cobalt gives glass a deep blue. Copper gives turquoise. Gold chloride gives ruby red. \
             Every piece cools in an annealer. Stress shows as rainbow bands.",
        ),
    ])?;

    let logits = MockLogitsProvider::hashed();
    let mut index = GranularIndex::default();
    for doc in corpus.docs() {
        let parents = lg_parent_chunks(doc, &LGConfig::new(12), &logits)?;
        index.extend(build_index(doc, parents, 12)?);
    }
    let embedder = HashEmbedder::new(128);
    let store = embed_index(&index, &corpus, &embedder, 16)?;

    let question = "Which oxide gives a deep blue?";
    let top = retrieve(question, &index, &store, &embedder, 3, &QueryOptions::default())?;
    for (i, p) in top.iter().enumerate() {
        println!("{}. {:.3} {}", i + 1, p.score, p.parent.chunk_id);
    }
    let context = assemble_context(&top, &corpus, 20)?;
    println!("\ncontext capped at 20 words ({} used):\n{}", context.word_count, context.text);
    Ok(())
}
