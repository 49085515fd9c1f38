//! Referring expression change (REC).
//!
//! A character chain scores 1 when its mentions are not all realised the
//! same way (name, pronoun, both, or other) and 0 when the form never
//! changes. The story score is the mean over labeled character chains.

use std::collections::BTreeMap;

use crate::error::InputError;
use crate::labeling::{realization_sequence, CharacterChainSet, PronounLexicon, RealizationSequence};
use crate::model::{ChainId, CharacterName, Story};

/// Per-chain change indicators and their story-level mean.
#[derive(Debug, Clone, PartialEq)]
pub struct RecReport {
    pub per_chain: BTreeMap<ChainId, bool>,
    /// Mean of the per-chain indicators; absent without character chains.
    pub story_rec: Option<f64>,
    /// Story word count, carried along for length correlations.
    pub word_count: usize,
}

/// Whether the realization form changes at least once along the chain.
pub fn rec_chain(seq: &RealizationSequence) -> Result<bool, InputError> {
    let Some(first) = seq.sequence.first() else {
        return Err(InputError::new(format!(
            "chain {} has an empty realization sequence",
            seq.chain_id
        )));
    };
    Ok(seq.sequence.iter().any(|r| r != first))
}

/// REC over every labeled character chain of a story.
pub fn rec_story(
    story: &Story,
    assignments: &CharacterChainSet,
    roster: &[CharacterName],
    lexicon: &PronounLexicon,
) -> RecReport {
    let mut per_chain = BTreeMap::new();
    for chain in &story.chains {
        if !assignments.assignments.contains_key(&chain.id) {
            continue;
        }
        // Chains with mentions by construction; skip degenerate input.
        if let Ok(seq) = realization_sequence(story, chain, roster, lexicon) {
            if let Ok(changed) = rec_chain(&seq) {
                per_chain.insert(chain.id, changed);
            }
        }
    }
    let story_rec = (!per_chain.is_empty()).then(|| {
        per_chain.values().filter(|&&c| c).count() as f64 / per_chain.len() as f64
    });
    RecReport { per_chain, story_rec, word_count: story.token_count() }
}
