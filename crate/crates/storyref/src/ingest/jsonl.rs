//! Canonical JSONL story format, one record per line.
//!
//! Record keys: `story_id`, `source_label`, `sentences` (list of token
//! lists), `chains` (list of mention lists, chain ids positional), `roster`,
//! and optionally `images` and `provenance`. Writing orders chains by id
//! and reading assigns ids by position, so one write/read pass normalizes
//! chain ids; after that the format round-trips byte-identically.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::ingest::{ParseError, StoryBundle};
use crate::model::{
    validate_story, Chain, ChainId, CharacterName, ImageAppearance, ImageSequence, Mention, Story,
};

#[derive(Debug, Serialize, Deserialize)]
struct StoryRecord {
    story_id: String,
    source_label: String,
    sentences: Vec<Vec<String>>,
    chains: Vec<Vec<Mention>>,
    #[serde(default)]
    roster: Vec<CharacterName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    images: Option<Vec<ImageAppearance>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<serde_json::Map<String, serde_json::Value>>,
}

/// Parse one line of the canonical format. `line_no` is used in errors.
pub fn parse_story_jsonl(line: &str, line_no: usize) -> Result<StoryBundle, ParseError> {
    let record: StoryRecord = serde_json::from_str(line)
        .map_err(|e| ParseError::Json { line: line_no, message: e.to_string() })?;

    if record.source_label.is_empty() {
        return Err(ParseError::Schema {
            story_id: record.story_id.clone(),
            message: "source_label must be non-empty".to_string(),
        });
    }

    let story = Story {
        story_id: record.story_id,
        sentences: record.sentences,
        chains: record
            .chains
            .into_iter()
            .enumerate()
            .map(|(i, mentions)| Chain::new(ChainId(i as u32), mentions))
            .collect(),
        roster: record.roster,
        images: record.images.map(ImageSequence::new),
    };

    let violations = validate_story(&story);
    if !violations.is_empty() {
        let message = violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(ParseError::Schema { story_id: story.story_id, message });
    }

    Ok(StoryBundle {
        story,
        source_label: record.source_label,
        provenance: record.provenance,
    })
}

/// Read a whole canonical JSONL stream, skipping blank lines.
pub fn read_jsonl(reader: impl BufRead) -> Result<Vec<StoryBundle>, ParseError> {
    let mut bundles = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        bundles.push(parse_story_jsonl(&line, idx + 1)?);
    }
    Ok(bundles)
}

/// Write bundles in the canonical format, one record per line.
pub fn write_jsonl(bundles: &[StoryBundle], mut sink: impl Write) -> std::io::Result<()> {
    for bundle in bundles {
        let mut chains: Vec<&Chain> = bundle.story.chains.iter().collect();
        chains.sort_by_key(|c| c.id);
        let record = StoryRecord {
            story_id: bundle.story.story_id.clone(),
            source_label: bundle.source_label.clone(),
            sentences: bundle.story.sentences.clone(),
            chains: chains.into_iter().map(|c| c.mentions.clone()).collect(),
            roster: bundle.story.roster.clone(),
            images: bundle.story.images.as_ref().map(|seq| seq.images.clone()),
            provenance: bundle.provenance.clone(),
        };
        serde_json::to_writer(&mut sink, &record).map_err(std::io::Error::other)?;
        sink.write_all(b"\n")?;
    }
    Ok(())
}
