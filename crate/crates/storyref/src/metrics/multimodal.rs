//! Multimodal character continuity (MCC).
//!
//! For each character, text continuity is the fraction of sentences between
//! its first and last mention that actually mention it; image continuity is
//! the same fraction over the image sequence. Their agreement,
//! `1 - |text - image|`, is the character's continuity consistency, and the
//! story score is the mean over characters seen in at least one modality.

use std::collections::BTreeSet;

use crate::labeling::CharacterChainSet;
use crate::model::{CharacterName, ImageSequence, Story};

/// Continuity of a presence set over its own first-to-last span. A single
/// occurrence spans one slot and is perfectly continuous.
fn span_continuity(presence: &BTreeSet<usize>) -> Option<f64> {
    let first = *presence.iter().next()?;
    let last = *presence.iter().next_back()?;
    Some(presence.len() as f64 / (last - first + 1) as f64)
}

/// Sentence indices in which any chain assigned to `character` is mentioned.
pub fn text_presence(
    story: &Story,
    assignments: &CharacterChainSet,
    character: &CharacterName,
) -> BTreeSet<usize> {
    let chain_ids = assignments.chains_for(character);
    story
        .chains
        .iter()
        .filter(|c| chain_ids.contains(&c.id))
        .flat_map(|c| c.sentences())
        .collect()
}

/// Fraction of sentences between the character's first and last mention that
/// mention it. Absent when the character is never mentioned.
pub fn text_continuity(
    story: &Story,
    assignments: &CharacterChainSet,
    character: &CharacterName,
) -> Option<f64> {
    span_continuity(&text_presence(story, assignments, character))
}

/// Fraction of images between the character's first and last appearance that
/// show it. Absent when the character appears in no image.
pub fn image_continuity(images: &ImageSequence, character: &CharacterName) -> Option<f64> {
    let presence: BTreeSet<usize> = images
        .images
        .iter()
        .enumerate()
        .filter(|(_, img)| img.shows(character))
        .map(|(j, _)| j)
        .collect();
    span_continuity(&presence)
}

/// Continuity of one character in both modalities.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityRecord {
    pub character: CharacterName,
    pub text_continuity: Option<f64>,
    pub image_continuity: Option<f64>,
    /// `1 - |text - image|`, with an absent modality counted as 0 presence:
    /// a character seen only in images (or only in text) is maximally
    /// inconsistent with the other modality.
    pub consistency: Option<f64>,
}

/// Per-character continuity records and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct StoryMccReport {
    pub records: Vec<ContinuityRecord>,
    pub mcc: Option<f64>,
}

/// Compute multimodal character continuity for every roster character
/// appearing in at least one modality.
///
/// Stories without image annotations have no multimodal signal at all, so
/// the result is empty with an absent score rather than a text-only
/// approximation.
pub fn mcc(
    story: &Story,
    assignments: &CharacterChainSet,
    images: Option<&ImageSequence>,
    roster: &[CharacterName],
) -> StoryMccReport {
    let Some(images) = images else {
        return StoryMccReport { records: Vec::new(), mcc: None };
    };

    let mut records = Vec::new();
    for character in roster {
        let text = text_continuity(story, assignments, character);
        let image = image_continuity(images, character);
        if text.is_none() && image.is_none() {
            continue;
        }
        let consistency = 1.0 - (text.unwrap_or(0.0) - image.unwrap_or(0.0)).abs();
        records.push(ContinuityRecord {
            character: character.clone(),
            text_continuity: text,
            image_continuity: image,
            consistency: Some(consistency),
        });
    }

    let defined: Vec<f64> = records.iter().filter_map(|r| r.consistency).collect();
    let mcc = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
    StoryMccReport { records, mcc }
}
