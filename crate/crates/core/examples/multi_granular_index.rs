use std::collections::HashMap;

use lgmgc::granularity::{build_index, rank_parents, score_parents};
use lgmgc::segmentation::{recursive_chunk, Document, SegmentedDoc, Separator};

fn main() -> lgmgc::Result<()> {
    let text = "The dome is painted white. White paint reflects sunlight. The air inside cools sooner. \
Warm air would blur the stars. Snow closes the road in November. Staff ride the cable car. \
Bread is baked every morning. Water boils at ninety-two degrees.";
    let doc = SegmentedDoc::new(Document::new("obs", text))?;
    let theta = 20;
    let parents = recursive_chunk(&doc, theta, &Separator::default_hierarchy())?;
    let index = build_index(&doc, parents, theta)?;

    for unit in index.units() {
        let indent = if index.parent_of.contains_key(&unit.chunk_id) { "    " } else { "" };
        println!("{indent}{:<14} {}", unit.level.as_str(), doc.chunk_text(unit));
    }

    // Toy scores: units mentioning the cable car, shorter ones higher.
    let scores: HashMap<String, f64> = index
        .units()
        .iter()
        .map(|u| {
            let hit = doc.chunk_text(u).contains("cable");
            let s = if hit { 2.0 / u.word_count as f64 } else { 0.05 };
            (u.chunk_id.clone(), s)
        })
        .collect();
    println!();
    for p in rank_parents(&score_parents(&index, &scores)?) {
        println!("{:.3}  {}  (best unit {})", p.score, p.parent.chunk_id, p.best_unit);
    }
    Ok(())
}
