use lgmgc::segmentation::{split_sentences, SentenceSplitter};

fn main() -> lgmgc::Result<()> {
    let text = "Dr. Aro arrived at 9 p.m. on the last cable car. The dome was open!\nShe checked the ledger, e.g. the entry for Vol. 3, and began.";
    for span in split_sentences(text)? {
        let sentence: String = text.chars().skip(span.start).take(span.end - span.start).collect();
        println!("[{:>3}..{:>3}] {:>2} words  {sentence}", span.start, span.end, span.word_count);
    }

    // A custom guard list replaces the bundled one.
    let strict = SentenceSplitter::from_guard_list("Dr.\n");
    println!("\nwith only `Dr.` guarded: {} sentences", strict.split(text)?.len());
    Ok(())
}
