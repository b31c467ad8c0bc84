//! The full chunk / index / retrieve / evaluate / sweep flow on the bundled
//! mini corpus with offline providers. Artifacts go to a temp directory.

use std::path::PathBuf;

use lgmgc::pipeline::{cmd_chunk, cmd_evaluate, cmd_index, cmd_retrieve, cmd_sweep, render_report, PipelineConfig, Providers};

fn main() -> lgmgc::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let out = std::env::temp_dir().join(format!("lgmgc-demo-{}", std::process::id()));

    let mut cfg = PipelineConfig::load(&fixtures.join("mini.toml"))?;
    cfg.paths.corpus = Some(fixtures.join("mini_corpus.jsonl"));
    cfg.paths.dataset = Some(fixtures.join("mini_queries.jsonl"));
    cfg.paths.index = Some(out.join("index.json"));
    cfg.paths.store = Some(out.join("store.json"));
    cfg.paths.report = Some(out.join("report.json"));
    let providers = Providers::from_config(&cfg)?;

    print!("{}", cmd_chunk(&cfg, &providers)?);
    print!("{}", cmd_index(&cfg, &providers)?);
    let hit = cmd_retrieve(&cfg, &providers, "Why is the observatory dome painted white?", Some("observatory"))?;
    println!("top parent: {} ({} context words)\n", hit.ranking[0].parent.chunk_id, hit.context.word_count);

    let report = cmd_evaluate(&cfg, &providers, None)?;
    print!("{}", render_report("lgmgc θ=60", &report));
    let sweep = cmd_sweep(&cfg, &providers, None, &cfg.thetas)?;
    print!("{}", sweep.render("lgmgc sweep"));
    println!("artifacts in {}", out.display());
    Ok(())
}
