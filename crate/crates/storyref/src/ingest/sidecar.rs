//! Sidecar annotation files: character rosters and image appearances keyed
//! by story id, attached to bundles after CoNLL ingestion.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::ingest::{ParseError, StoryBundle};
use crate::model::{CharacterName, ImageAppearance, ImageSequence};

/// One sidecar record: the roster and image annotations of one story.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SidecarRecord {
    pub story_id: String,
    #[serde(default)]
    pub roster: Vec<CharacterName>,
    #[serde(default)]
    pub images: Option<Vec<ImageAppearance>>,
}

/// Read a sidecar JSONL stream into a map keyed by story id.
pub fn read_sidecar(reader: impl BufRead) -> Result<BTreeMap<String, SidecarRecord>, ParseError> {
    let mut records = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: SidecarRecord = serde_json::from_str(&line)
            .map_err(|e| ParseError::Json { line: idx + 1, message: e.to_string() })?;
        records.insert(record.story_id.clone(), record);
    }
    Ok(records)
}

/// Attach image annotations and a roster to a bundle.
///
/// Detection labels that resolve against the roster (aliases allowed,
/// case-insensitive) are rewritten to the canonical name. `Unknown`
/// detections are kept as-is; they never match a roster entry. Any other
/// unresolvable label is also kept verbatim and listed under
/// `unresolved_characters` in the bundle provenance.
pub fn attach_image_annotations(
    bundle: StoryBundle,
    annotations: ImageSequence,
    roster: Vec<CharacterName>,
) -> StoryBundle {
    let mut unresolved: Vec<String> = Vec::new();
    let images: Vec<ImageAppearance> = annotations
        .images
        .into_iter()
        .map(|mut image| {
            image.characters = image
                .characters
                .into_iter()
                .map(|label| match roster.iter().find(|name| name.matches(&label)) {
                    Some(name) => name.canonical.clone(),
                    None => {
                        if label != "Unknown" && !unresolved.contains(&label) {
                            unresolved.push(label.clone());
                        }
                        label
                    }
                })
                .collect();
            image
        })
        .collect();

    let mut bundle = bundle;
    bundle.story.roster = roster;
    bundle.story.images = Some(ImageSequence::new(images));
    if !unresolved.is_empty() {
        unresolved.sort();
        let mut provenance = bundle.provenance.unwrap_or_default();
        provenance.insert(
            "unresolved_characters".to_string(),
            serde_json::Value::Array(
                unresolved.into_iter().map(serde_json::Value::String).collect(),
            ),
        );
        bundle.provenance = Some(provenance);
    }
    bundle
}
