mod config;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::{FileConfig, Overrides, RunConfig, Strategy};
use mutsel_core::toy::{self, ToyConfig};

#[derive(Parser)]
#[command(name = "mutsel", version, about = "Subsuming-mutant selection pipeline")]
struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Corpus directory (must contain manifest.json).
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Sequence length budget: 25, 50 or 100 tokens.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Keep raw identifiers and literals.
    #[arg(long, global = true)]
    no_abstraction: bool,
    /// Allow-list file of idioms kept verbatim.
    #[arg(long, global = true)]
    allowlist: Option<PathBuf>,
    /// Label-noise rate applied before simulation.
    #[arg(long, global = true)]
    noise: Option<f64>,
    /// Target MS* at which a simulation repetition stops.
    #[arg(long, global = true)]
    target_ms: Option<f64>,
    /// Simulation repetitions.
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Restrict to the given strategies (repeatable).
    #[arg(long = "strategy", global = true, value_enum)]
    strategies: Vec<Strategy>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize, abstract, annotate and window every mutant.
    Abstract,
    /// Compute ground-truth labels and the subsumption graph.
    Label,
    /// Build cross-project folds and the pair files.
    Dataset,
    /// Train one model per fold and strategy.
    Train,
    /// Predict every mutant with its held-out model.
    Predict,
    /// Run the mutation-testing simulation.
    Simulate,
    /// Write metrics, summaries and effect sizes.
    Report,
    /// All stages in order.
    Run,
    /// Write the synthetic toy corpus.
    GenToy {
        #[arg(long, default_value_t = 5)]
        projects: usize,
        #[arg(long, default_value_t = 5)]
        units: usize,
    },
}

fn execute(cli: Cli) -> Result<String> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = Overrides {
        seed: cli.seed,
        corpus: cli.corpus,
        out: cli.out,
        budget: cli.budget,
        no_abstraction: cli.no_abstraction,
        allowlist: cli.allowlist,
        noise: cli.noise,
        target_ms: cli.target_ms,
        reps: cli.reps,
        strategies: cli.strategies,
    };
    if let Command::GenToy { projects, units } = cli.command {
        let seed = flags
            .seed
            .or(file.seed)
            .ok_or_else(|| anyhow::anyhow!("a master seed is required (`seed` in the config or --seed)"))?;
        let out = flags.out.or(file.out).unwrap_or_else(|| PathBuf::from("data/toy"));
        let mut cfg = ToyConfig::new(seed);
        cfg.projects = projects;
        cfg.units_per_project = units;
        let corpus = toy::generate(&cfg)?;
        corpus.save(&out)?;
        return Ok(format!("wrote {} mutants to {}", corpus.mutants().len(), out.display()));
    }
    let cfg = RunConfig::resolve(file, flags)?;
    match cli.command {
        Command::Abstract => pipeline::cmd_abstract(&cfg),
        Command::Label => pipeline::cmd_label(&cfg),
        Command::Dataset => pipeline::cmd_dataset(&cfg),
        Command::Train => pipeline::cmd_train(&cfg),
        Command::Predict => pipeline::cmd_predict(&cfg),
        Command::Simulate => pipeline::cmd_simulate(&cfg),
        Command::Report => pipeline::cmd_report(&cfg),
        Command::Run => pipeline::cmd_run(&cfg),
        Command::GenToy { .. } => unreachable!("handled above"),
    }
}

/// Variant name of the innermost library error, or a coarse fallback.
fn error_kind(err: &anyhow::Error) -> String {
    for cause in err.chain() {
        if let Some(t) = cause.downcast_ref::<pipeline::Tagged>() {
            return t.kind.to_string();
        }
        if let Some(e) = cause.downcast_ref::<mutsel_core::Error>() {
            let debug = format!("{e:?}");
            let end = debug.find(|c: char| !c.is_alphanumeric()).unwrap_or(debug.len());
            return debug[..end].to_string();
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return "Io".into();
        }
    }
    "Usage".into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let body = serde_json::json!({ "error": format!("{err:#}"), "kind": error_kind(&err) });
            eprintln!("{body}");
            ExitCode::FAILURE
        }
    }
}
