//! Regenerate the committed test fixtures under `tests/fixtures/`.
//!
//! Run from the repository root:
//!
//! ```text
//! cargo run -p storyref-cli --example make_fixtures
//! ```
//!
//! The fixture corpus is two synthetic sources serialized as CoNLL plus a
//! shared sidecar carrying rosters and image annotations, together with the
//! frozen end-to-end comparison output the pipeline tests assert against.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use storyref::ingest::{write_conll, write_jsonl, SidecarRecord, StoryBundle};
use storyref::synth::{generate, PresencePattern, RealizationPattern, SplitMix64, SynthParams};
use storyref_cli::commands::{
    cmd_compare, cmd_compute, cmd_ingest, CompareArgs, ComputeArgs, IngestArgs, IngestFormat,
};
use storyref_cli::render::OutputFormat;

fn corpus(
    label: &str,
    master_seed: u64,
    count: usize,
    sentences: usize,
    characters: usize,
    presence: PresencePattern,
    images: PresencePattern,
) -> Vec<StoryBundle> {
    let mut seeds = SplitMix64::new(master_seed);
    (0..count)
        .map(|i| {
            let params = SynthParams {
                seed: seeds.next_u64(),
                n_sentences: sentences,
                n_characters: characters,
                presence,
                realization: RealizationPattern::Alternating,
                images,
            };
            let (mut bundle, _) = generate(&params).expect("valid params");
            bundle.story.story_id = format!("{label}-{i:05}");
            bundle.source_label = label.to_string();
            bundle
        })
        .collect()
}

/// CoNLL ingest labels sources by file stem, so the fixture file is named
/// after its corpus label.
fn write_fixture_corpus(dir: &Path, label: &str, bundles: &[StoryBundle]) -> PathBuf {
    let conll_path = dir.join(format!("{label}.conll"));
    let mut conll = BufWriter::new(File::create(&conll_path).unwrap());
    write_conll(bundles, &mut conll).unwrap();
    conll.flush().unwrap();
    conll_path
}

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    std::fs::create_dir_all(&dir).unwrap();

    let human = corpus(
        "human",
        11,
        10,
        7,
        3,
        PresencePattern::Random(0.75),
        PresencePattern::Random(0.8),
    );
    let model = corpus(
        "model-a",
        29,
        10,
        9,
        4,
        PresencePattern::Random(0.35),
        PresencePattern::Random(0.5),
    );

    let human_conll = write_fixture_corpus(&dir, "human", &human);
    let model_conll = write_fixture_corpus(&dir, "model-a", &model);

    // Sidecar: rosters and image annotations for both corpora.
    let sidecar_path = dir.join("sidecar.jsonl");
    {
        let mut sidecar = BufWriter::new(File::create(&sidecar_path).unwrap());
        for bundle in human.iter().chain(&model) {
            let record = SidecarRecord {
                story_id: bundle.story.story_id.clone(),
                roster: bundle.story.roster.clone(),
                images: bundle.story.images.as_ref().map(|seq| seq.images.clone()),
            };
            serde_json::to_writer(&mut sidecar, &record).unwrap();
            sidecar.write_all(b"\n").unwrap();
        }
        sidecar.flush().unwrap();
    }

    // Canonical JSONL of the same corpora, for JSONL-ingest tests.
    {
        let mut all = human.clone();
        all.extend(model.clone());
        let mut jsonl = BufWriter::new(File::create(dir.join("corpus.jsonl")).unwrap());
        write_jsonl(&all, &mut jsonl).unwrap();
        jsonl.flush().unwrap();
    }

    // A CoNLL file with malformed documents planted among good ones.
    let broken_path = dir.join("corpus_broken.conll");
    {
        let mut text = String::new();
        for i in 0..10 {
            text.push_str(&format!("#begin document (broken-{i:02})\n"));
            match i {
                3 => text.push_str("b 0 left (0\nb 1 open -\n\n"),
                7 => text.push_str("b 0 shut 0)\n\n"),
                _ => text.push_str("b 0 Ann (0)\nb 1 waves -\nb 2 . -\n\n"),
            }
            text.push_str("#end document\n");
        }
        std::fs::write(&broken_path, text).unwrap();
    }

    // Freeze the full pipeline output: ingest -> compute -> compare.
    let canonical = dir.join("expected_ingest.jsonl");
    cmd_ingest(&IngestArgs {
        inputs: vec![human_conll, model_conll],
        format: IngestFormat::Conll,
        sidecar: Some(sidecar_path),
        source_label: None,
        require_images: false,
        out: canonical.clone(),
    })
    .unwrap();

    let metrics = dir.join("expected_metrics.jsonl");
    cmd_compute(&ComputeArgs {
        corpus: canonical,
        out: metrics.clone(),
        jobs: 1,
        pronoun_lexicon: None,
    })
    .unwrap();

    for (format, name) in [
        (OutputFormat::Json, "expected_compare.json"),
        (OutputFormat::Md, "expected_compare.md"),
        (OutputFormat::Csv, "expected_compare.csv"),
    ] {
        cmd_compare(&CompareArgs {
            inputs: vec![metrics.clone()],
            reference: "human".to_string(),
            format,
            out: dir.join(name),
        })
        .unwrap();
    }

    println!("fixtures written to {}", dir.display());
}
