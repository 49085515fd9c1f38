//! Subcommand implementations. Each returns the process exit code: 0 for
//! full success, 2 for partial success (some records skipped, diagnostics
//! on stderr), while fatal problems surface as errors and exit 1.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use storyref::ingest::{
    attach_image_annotations, parse_conll_coref_lenient, parse_story_jsonl, read_sidecar,
    write_jsonl, SidecarRecord, StoryBundle,
};
use storyref::labeling::PronounLexicon;
use storyref::model::ImageSequence;
use storyref::report::{pairwise_metric_correlation, Metric, MetricReport};
use storyref::synth::{generate, PresencePattern, RealizationPattern, SynthParams, SplitMix64};

use crate::comparison::build_comparison;
use crate::render::{render, OutputFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum IngestFormat {
    Conll,
    Jsonl,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("cannot open {}", path.display()))?,
    ))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
    ))
}

fn source_label_for(path: &Path, flag: &Option<String>) -> String {
    flag.clone().unwrap_or_else(|| {
        path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "corpus".into())
    })
}

/// Parse input files into the canonical JSONL format, attaching sidecar
/// rosters and image annotations when given.
pub struct IngestArgs {
    pub inputs: Vec<PathBuf>,
    pub format: IngestFormat,
    pub sidecar: Option<PathBuf>,
    pub source_label: Option<String>,
    pub require_images: bool,
    pub out: PathBuf,
}

pub fn cmd_ingest(args: &IngestArgs) -> Result<u8> {
    if args.inputs.is_empty() {
        bail!("no input files given");
    }
    let sidecar: Option<BTreeMap<String, SidecarRecord>> = match &args.sidecar {
        Some(path) => Some(read_sidecar(open(path)?)?),
        None => {
            if args.require_images {
                bail!("--require-images needs a --sidecar file");
            }
            None
        }
    };

    let mut bundles: Vec<StoryBundle> = Vec::new();
    let mut skipped = 0usize;
    for input in &args.inputs {
        let label = source_label_for(input, &args.source_label);
        let reader = open(input)?;
        match args.format {
            IngestFormat::Conll => {
                let (parsed, errors) = parse_conll_coref_lenient(reader, &label)?;
                for error in &errors {
                    eprintln!("warning: {}: {error}", input.display());
                }
                skipped += errors.len();
                bundles.extend(parsed);
            }
            IngestFormat::Jsonl => {
                use std::io::BufRead;
                for (idx, line) in reader.lines().enumerate() {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    match parse_story_jsonl(&line, idx + 1) {
                        Ok(bundle) => bundles.push(bundle),
                        Err(error) => {
                            eprintln!("warning: {}: {error}", input.display());
                            skipped += 1;
                        }
                    }
                }
            }
        }
    }

    if let Some(records) = &sidecar {
        let mut attached = Vec::with_capacity(bundles.len());
        for bundle in bundles {
            match records.get(&bundle.story.story_id) {
                Some(record) => {
                    let images = ImageSequence::new(record.images.clone().unwrap_or_default());
                    if args.require_images && images.is_empty() {
                        eprintln!(
                            "warning: story {:?} has no image annotations in the sidecar; skipped",
                            bundle.story.story_id
                        );
                        skipped += 1;
                        continue;
                    }
                    attached.push(attach_image_annotations(bundle, images, record.roster.clone()));
                }
                None if args.require_images => {
                    eprintln!(
                        "warning: story {:?} missing from the sidecar; skipped",
                        bundle.story.story_id
                    );
                    skipped += 1;
                }
                None => attached.push(bundle),
            }
        }
        bundles = attached;
    }

    let mut out = create(&args.out)?;
    write_jsonl(&bundles, &mut out)?;
    out.flush()?;
    Ok(if skipped > 0 { 2 } else { 0 })
}

/// Compute one metric report per story of a canonical JSONL corpus.
pub struct ComputeArgs {
    pub corpus: PathBuf,
    pub out: PathBuf,
    pub jobs: usize,
    pub pronoun_lexicon: Option<PathBuf>,
}

pub fn cmd_compute(args: &ComputeArgs) -> Result<u8> {
    let lexicon = match &args.pronoun_lexicon {
        Some(path) => PronounLexicon::from_path(path)
            .with_context(|| format!("cannot read pronoun lexicon {}", path.display()))?,
        None => PronounLexicon::default(),
    };
    let bundles = storyref::ingest::read_jsonl(open(&args.corpus)?)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .context("cannot build worker pool")?;
    let mut reports: Vec<MetricReport> =
        pool.install(|| bundles.par_iter().map(|b| storyref::compute_report(b, &lexicon)).collect());

    // Gathered output is emitted in a deterministic order regardless of
    // worker scheduling.
    reports.sort_by(|a, b| {
        (&a.story_id, &a.source_label).cmp(&(&b.story_id, &b.source_label))
    });

    let mut out = create(&args.out)?;
    for report in &reports {
        serde_json::to_writer(&mut out, report)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(0)
}

/// Compare per-source metric distributions against a reference source.
pub struct CompareArgs {
    pub inputs: Vec<PathBuf>,
    pub reference: String,
    pub format: OutputFormat,
    pub out: PathBuf,
}

fn read_reports(path: &Path) -> Result<Vec<MetricReport>> {
    use std::io::BufRead;
    let mut reports = Vec::new();
    for (idx, line) in open(path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let report: MetricReport = serde_json::from_str(&line)
            .with_context(|| format!("{}:{}", path.display(), idx + 1))?;
        reports.push(report);
    }
    Ok(reports)
}

pub fn cmd_compare(args: &CompareArgs) -> Result<u8> {
    if args.inputs.is_empty() {
        bail!("no metric report files given");
    }
    let mut reports = Vec::new();
    for input in &args.inputs {
        reports.extend(read_reports(input)?);
    }
    let comparison = build_comparison(&reports, &args.reference)?;
    let text = render(&comparison, args.format)?;
    let mut out = create(&args.out)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(0)
}

/// Pearson correlation between two metrics over one corpus of reports.
pub struct CorrelateArgs {
    pub corpus: PathBuf,
    pub metric_a: Metric,
    pub metric_b: Metric,
}

pub fn cmd_correlate(args: &CorrelateArgs, mut out: impl Write) -> Result<u8> {
    let reports = read_reports(&args.corpus)?;
    let (result, n, n_excluded) =
        pairwise_metric_correlation(&reports, args.metric_a, args.metric_b)?;
    writeln!(
        out,
        "{} ~ {}: rho={} p={} n={} n_excluded={}{}",
        args.metric_a,
        args.metric_b,
        result.statistic,
        result.p_value,
        n,
        n_excluded,
        if result.significant_05 { " **" } else { "" },
    )?;
    Ok(0)
}

/// Generate a deterministic synthetic fixture corpus.
pub struct SynthArgs {
    pub seed: u64,
    pub count: usize,
    pub sentences: usize,
    pub characters: usize,
    pub presence: PresencePattern,
    pub realization: RealizationPattern,
    pub images: PresencePattern,
    pub source_label: String,
    pub out: PathBuf,
}

pub fn parse_presence(s: &str) -> Result<PresencePattern> {
    match s {
        "dense" => Ok(PresencePattern::Dense),
        "alternating" => Ok(PresencePattern::Alternating),
        "block" => Ok(PresencePattern::Block),
        other => match other.strip_prefix("random:") {
            Some(p) => Ok(PresencePattern::Random(p.parse::<f64>().with_context(|| {
                format!("bad probability in presence pattern {other:?}")
            })?)),
            None => bail!("unknown presence pattern {other:?}; expected dense, alternating, block, or random:<p>"),
        },
    }
}

pub fn parse_realization(s: &str) -> Result<RealizationPattern> {
    match s {
        "constant-name" => Ok(RealizationPattern::ConstantName),
        "constant-pronoun" => Ok(RealizationPattern::ConstantPronoun),
        "alternating" => Ok(RealizationPattern::Alternating),
        other => bail!(
            "unknown realization pattern {other:?}; expected constant-name, constant-pronoun, or alternating"
        ),
    }
}

pub fn cmd_synth(args: &SynthArgs) -> Result<u8> {
    let mut seeds = SplitMix64::new(args.seed);
    let mut bundles = Vec::with_capacity(args.count);
    for i in 0..args.count {
        let params = SynthParams {
            seed: seeds.next_u64(),
            n_sentences: args.sentences,
            n_characters: args.characters,
            presence: args.presence,
            realization: args.realization,
            images: args.images,
        };
        let (mut bundle, _) = generate(&params)?;
        bundle.story.story_id = format!("{}-{i:05}", args.source_label);
        bundle.source_label = args.source_label.clone();
        bundles.push(bundle);
    }
    let mut out = create(&args.out)?;
    write_jsonl(&bundles, &mut out)?;
    out.flush()?;
    Ok(0)
}
