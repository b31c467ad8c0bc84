use lgmgc::segmentation::{paragraph_chunk, recursive_chunk, Document, SegmentedDoc, Separator};

const TEXT: &str = "The mill stood on the river bend. Its wheel was nine metres across. \
A wooden shaft carried the power inside.\n\nDressing the stones was skilled work. \
The miller cut fresh furrows with a steel pick. Flakes of steel lodged in his hands. \
A well-dressed pair could grind a sack in twenty minutes.\n\nRoller mills took the trade away. \
The wheel stopped in 1951.";

fn main() -> lgmgc::Result<()> {
    let doc = SegmentedDoc::new(Document::new("mill", TEXT))?;
    println!("{} sentences, {} words\n", doc.sentences().len(), doc.document().word_count);

    for theta in [12, 25, 40] {
        println!("theta = {theta}");
        for chunk in recursive_chunk(&doc, theta, &Separator::default_hierarchy())? {
            println!("  {:>2} words | {}", chunk.word_count, doc.chunk_text(&chunk).replace('\n', " / "));
        }
    }

    println!("paragraphs");
    for chunk in paragraph_chunk(&doc) {
        println!("  {:>2} words | {}", chunk.word_count, doc.chunk_text(&chunk));
    }
    Ok(())
}
