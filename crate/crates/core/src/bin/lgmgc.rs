use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lgmgc::pipeline::{
    cmd_chunk, cmd_evaluate, cmd_index, cmd_retrieve, cmd_sweep, render_report, ChunkerKind, PipelineConfig, Providers,
};
use lgmgc::Error;

#[derive(Parser)]
#[command(name = "lgmgc", version, about = "Logits-guided multi-granular chunking for retrieval")]
struct Cli {
    /// TOML config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Use deterministic in-process providers
    #[arg(long, global = true)]
    mock: bool,
    #[arg(long, global = true)]
    theta: Option<usize>,
    #[arg(long, global = true)]
    k: Option<usize>,
    /// recursive | paragraph | logits | multigranular | lgmgc
    #[arg(long, global = true)]
    chunker: Option<ChunkerKind>,
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    #[arg(long, global = true)]
    index: Option<PathBuf>,
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chunk the corpus and write the index file
    Chunk,
    /// Embed every retrieval unit of the index
    Index,
    /// Print the top-k parents and the assembled context for a question
    Retrieve {
        question: String,
        /// Search one document only
        #[arg(long)]
        doc: Option<String>,
    },
    /// Evaluate on a JSONL question file
    Evaluate { dataset: Option<PathBuf> },
    /// Evaluate once per theta and aggregate
    Sweep {
        dataset: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        thetas: Option<Vec<usize>>,
    },
}

fn config(cli: &Cli) -> Result<PipelineConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    cfg.jobs = cli.jobs.unwrap_or(cfg.jobs);
    cfg.mock |= cli.mock;
    cfg.theta = cli.theta.unwrap_or(cfg.theta);
    cfg.k = cli.k.unwrap_or(cfg.k);
    cfg.chunker = cli.chunker.unwrap_or(cfg.chunker);
    let paths = &mut cfg.paths;
    for (flag, slot) in [
        (&cli.corpus, &mut paths.corpus),
        (&cli.index, &mut paths.index),
        (&cli.store, &mut paths.store),
        (&cli.report, &mut paths.report),
    ] {
        if flag.is_some() {
            slot.clone_from(flag);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = config(&cli)?;
    let providers = Providers::from_config(&cfg)?;
    match &cli.command {
        Command::Chunk => print!("{}", cmd_chunk(&cfg, &providers)?),
        Command::Index => print!("{}", cmd_index(&cfg, &providers)?),
        Command::Retrieve { question, doc } => {
            print!("{}", cmd_retrieve(&cfg, &providers, question, doc.as_deref())?)
        }
        Command::Evaluate { dataset } => {
            let report = cmd_evaluate(&cfg, &providers, dataset.as_deref())?;
            print!("{}", render_report(cfg.chunker.as_str(), &report));
        }
        Command::Sweep { dataset, thetas } => {
            let thetas = thetas.clone().unwrap_or_else(|| cfg.thetas.clone());
            let sweep = cmd_sweep(&cfg, &providers, dataset.as_deref(), &thetas)?;
            print!("{}", sweep.render(cfg.chunker.as_str()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
