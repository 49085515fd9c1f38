use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use storyref::report::Metric;
use storyref_cli::commands::{
    cmd_compare, cmd_compute, cmd_correlate, cmd_ingest, cmd_synth, parse_presence,
    parse_realization, CompareArgs, ComputeArgs, CorrelateArgs, IngestArgs, IngestFormat,
    SynthArgs,
};
use storyref_cli::config::FileConfig;
use storyref_cli::render::OutputFormat;

/// Narrative consistency metrics over coreference-annotated visual stories.
#[derive(Parser)]
#[command(name = "storyref", version, about)]
struct Cli {
    /// Optional key=value config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse CoNLL or JSONL inputs into the canonical JSONL corpus format.
    Ingest(IngestCli),
    /// Compute per-story metric reports for a canonical JSONL corpus.
    Compute(ComputeCli),
    /// Compare per-source metric distributions against a reference source.
    Compare(CompareCli),
    /// Pearson correlation between two metrics over a corpus of reports.
    Correlate(CorrelateCli),
    /// Generate a deterministic synthetic fixture corpus.
    Synth(SynthCli),
}

#[derive(Args)]
struct IngestCli {
    /// Input annotation files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Input format.
    #[arg(long, value_enum, default_value = "conll")]
    format: IngestFormat,
    /// JSONL sidecar with rosters and image annotations, keyed by story id.
    #[arg(long)]
    sidecar: Option<PathBuf>,
    /// Corpus label for all inputs; defaults to each input's file stem.
    #[arg(long)]
    source_label: Option<String>,
    /// Fail stories that end up without image annotations.
    #[arg(long)]
    require_images: bool,
    /// Output path for the canonical JSONL corpus.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ComputeCli {
    /// Canonical JSONL corpus.
    corpus: PathBuf,
    /// Output path for the metric reports (JSONL, ordered by story id).
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; 0 means one per core.
    #[arg(long)]
    jobs: Option<usize>,
    /// Replace the built-in pronoun list (one token per line).
    #[arg(long)]
    pronoun_lexicon: Option<PathBuf>,
}

#[derive(Args)]
struct CompareCli {
    /// Metric report files produced by `compute`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Reference source label for significance tests.
    #[arg(long)]
    reference: Option<String>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CorrelateCli {
    /// Metric report file produced by `compute`.
    corpus: PathBuf,
    /// First metric name.
    #[arg(long)]
    metric_a: Metric,
    /// Second metric name.
    #[arg(long)]
    metric_b: Metric,
}

#[derive(Args)]
struct SynthCli {
    /// Master seed; story seeds derive from it deterministically.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of stories.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Sentences per story.
    #[arg(long, default_value_t = 5)]
    sentences: usize,
    /// Characters per story.
    #[arg(long, default_value_t = 2)]
    characters: usize,
    /// Text presence pattern: dense, alternating, block, or random:<p>.
    #[arg(long, default_value = "dense")]
    presence: String,
    /// Mention realization: constant-name, constant-pronoun, or alternating.
    #[arg(long, default_value = "constant-name")]
    realization: String,
    /// Image presence pattern, same options as --presence.
    #[arg(long, default_value = "dense")]
    images: String,
    /// Corpus label and story id prefix.
    #[arg(long)]
    source_label: Option<String>,
    /// Output path for the canonical JSONL corpus.
    #[arg(long)]
    out: PathBuf,
}

fn run(cli: Cli) -> Result<u8> {
    let config = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };

    match cli.command {
        Command::Ingest(args) => cmd_ingest(&IngestArgs {
            inputs: args.inputs,
            format: args.format,
            sidecar: args.sidecar,
            source_label: match args.source_label {
                Some(label) => Some(label),
                None => config.get("source-label").map(str::to_string),
            },
            require_images: args.require_images,
            out: args.out,
        }),
        Command::Compute(args) => cmd_compute(&ComputeArgs {
            corpus: args.corpus,
            out: args.out,
            jobs: config.resolve(args.jobs, "jobs", 0, |s| Ok(s.parse()?))?,
            pronoun_lexicon: match args.pronoun_lexicon {
                Some(path) => Some(path),
                None => config.get("pronoun-lexicon").map(PathBuf::from),
            },
        }),
        Command::Compare(args) => cmd_compare(&CompareArgs {
            inputs: args.inputs,
            reference: config.resolve(args.reference, "reference", "human".to_string(), |s| {
                Ok(s.to_string())
            })?,
            format: config.resolve(args.format, "format", OutputFormat::Md, |s| s.parse())?,
            out: args.out,
        }),
        Command::Correlate(args) => cmd_correlate(
            &CorrelateArgs { corpus: args.corpus, metric_a: args.metric_a, metric_b: args.metric_b },
            std::io::stdout().lock(),
        ),
        Command::Synth(args) => cmd_synth(&SynthArgs {
            seed: config.resolve(args.seed, "seed", 0, |s| Ok(s.parse()?))?,
            count: args.count,
            sentences: args.sentences,
            characters: args.characters,
            presence: parse_presence(&args.presence)?,
            realization: parse_realization(&args.realization)?,
            images: parse_presence(&args.images)?,
            source_label: args.source_label.unwrap_or_else(|| "synthetic".to_string()),
            out: args.out,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(1)
        }
    }
}
