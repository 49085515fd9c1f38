//! In-memory representation of coreference-annotated stories.
//!
//! A [`Story`] holds pre-tokenized sentences, coreference chains over token
//! spans, an optional character roster, and an optional image appearance
//! sequence. All types are immutable after construction; the operations in
//! this module are pure functions, so stories can be processed in parallel
//! without coordination.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::InputError;

/// Identifier of a coreference chain, opaque beyond equality and ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChainId(pub u32);

impl fmt::Display for ChainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A contiguous token span realizing one reference to an entity.
///
/// `start` and `end` are 0-based token indices into the sentence; `end` is
/// inclusive, so a single-token mention has `start == end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mention {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
}

impl Mention {
    pub fn new(sentence: usize, start: usize, end: usize) -> Self {
        Mention { sentence, start, end }
    }
}

/// All mentions referring to the same entity, in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub id: ChainId,
    pub mentions: Vec<Mention>,
}

impl Chain {
    pub fn new(id: ChainId, mentions: Vec<Mention>) -> Self {
        Chain { id, mentions }
    }

    /// Set of sentence indices in which this chain has at least one mention.
    pub fn sentences(&self) -> BTreeSet<usize> {
        self.mentions.iter().map(|m| m.sentence).collect()
    }
}

/// A named character with optional aliases; matching is case-insensitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterName {
    pub canonical: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
}

impl CharacterName {
    pub fn new(canonical: impl Into<String>) -> Self {
        CharacterName { canonical: canonical.into(), aliases: Vec::new() }
    }

    pub fn with_aliases<I, S>(canonical: impl Into<String>, aliases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        CharacterName {
            canonical: canonical.into(),
            aliases: aliases.into_iter().map(Into::into).collect(),
        }
    }

    /// Case-insensitive match against the canonical name or any alias.
    pub fn matches(&self, token: &str) -> bool {
        let token = token.to_lowercase();
        token == self.canonical.to_lowercase()
            || self.aliases.iter().any(|a| token == a.to_lowercase())
    }
}

/// Bounding-box detection of one character in one image, with the box area
/// as a fraction of the image area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxAnnotation {
    pub character: String,
    pub relative_area: f64,
}

/// The characters visible in one image of the sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageAppearance {
    pub image_id: String,
    pub characters: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boxes: Option<Vec<BoxAnnotation>>,
}

impl ImageAppearance {
    pub fn new<I, S>(image_id: impl Into<String>, characters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ImageAppearance {
            image_id: image_id.into(),
            characters: characters.into_iter().map(Into::into).collect(),
            boxes: None,
        }
    }

    /// Whether the given character is detected in this image, matching the
    /// stored detection labels case-insensitively against name and aliases.
    pub fn shows(&self, character: &CharacterName) -> bool {
        self.characters.iter().any(|c| character.matches(c))
    }
}

/// Ordered image appearance annotations for one story.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ImageSequence {
    pub images: Vec<ImageAppearance>,
}

impl ImageSequence {
    pub fn new(images: Vec<ImageAppearance>) -> Self {
        ImageSequence { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

/// One coreference-annotated story.
#[derive(Debug, Clone, PartialEq)]
pub struct Story {
    pub story_id: String,
    /// Tokenized sentences; tokens are surface strings.
    pub sentences: Vec<Vec<String>>,
    pub chains: Vec<Chain>,
    pub roster: Vec<CharacterName>,
    pub images: Option<ImageSequence>,
}

impl Story {
    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    /// Total token count across all sentences, punctuation included.
    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn chain(&self, id: ChainId) -> Option<&Chain> {
        self.chains.iter().find(|c| c.id == id)
    }

    pub fn chain_ids(&self) -> BTreeSet<ChainId> {
        self.chains.iter().map(|c| c.id).collect()
    }

    /// Tokens covered by a mention; empty when the span is out of range.
    pub fn mention_tokens(&self, mention: &Mention) -> &[String] {
        match self.sentences.get(mention.sentence) {
            Some(s) if mention.start <= mention.end && mention.end < s.len() => {
                &s[mention.start..=mention.end]
            }
            _ => &[],
        }
    }

    pub fn mention_text(&self, mention: &Mention) -> String {
        self.mention_tokens(mention).join(" ")
    }
}

/// A structural invariant broken by a story. Violations are data, not
/// failures: [`validate_story`] reports all of them and never errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoSentences,
    EmptySentence { sentence: usize },
    EmptyChain { chain: ChainId },
    DuplicateChainId { chain: ChainId },
    SpanOutOfRange { chain: ChainId, mention: Mention },
    UnorderedChain { chain: ChainId },
    /// The same token span belongs to two chains.
    SharedMention { mention: Mention, chains: (ChainId, ChainId) },
    EmptyCharacterName { index: usize },
    BoxAreaOutOfRange { image: usize, character: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSentences => write!(f, "story has no sentences"),
            Violation::EmptySentence { sentence } => {
                write!(f, "sentence {sentence} has no tokens")
            }
            Violation::EmptyChain { chain } => write!(f, "chain {chain} has no mentions"),
            Violation::DuplicateChainId { chain } => {
                write!(f, "chain id {chain} appears more than once")
            }
            Violation::SpanOutOfRange { chain, mention } => write!(
                f,
                "chain {chain} mention {}..{} out of range in sentence {}",
                mention.start, mention.end, mention.sentence
            ),
            Violation::UnorderedChain { chain } => {
                write!(f, "chain {chain} mentions are not in document order")
            }
            Violation::SharedMention { mention, chains } => write!(
                f,
                "span {}..{} in sentence {} belongs to chains {} and {}",
                mention.start, mention.end, mention.sentence, chains.0, chains.1
            ),
            Violation::EmptyCharacterName { index } => {
                write!(f, "roster entry {index} has an empty canonical name")
            }
            Violation::BoxAreaOutOfRange { image, character } => write!(
                f,
                "bounding box for {character:?} in image {image} has relative area outside [0,1]"
            ),
        }
    }
}

/// Check every structural invariant of a story and return all violations.
/// An empty result means the story is well-formed.
pub fn validate_story(story: &Story) -> Vec<Violation> {
    let mut violations = Vec::new();

    if story.sentences.is_empty() {
        violations.push(Violation::NoSentences);
    }
    for (i, sentence) in story.sentences.iter().enumerate() {
        if sentence.is_empty() {
            violations.push(Violation::EmptySentence { sentence: i });
        }
    }

    let mut seen_ids = BTreeSet::new();
    let mut span_owner: BTreeMap<Mention, ChainId> = BTreeMap::new();
    for chain in &story.chains {
        if !seen_ids.insert(chain.id) {
            violations.push(Violation::DuplicateChainId { chain: chain.id });
        }
        if chain.mentions.is_empty() {
            violations.push(Violation::EmptyChain { chain: chain.id });
        }
        for mention in &chain.mentions {
            let in_range = story
                .sentences
                .get(mention.sentence)
                .map(|s| mention.start <= mention.end && mention.end < s.len())
                .unwrap_or(false);
            if !in_range {
                violations.push(Violation::SpanOutOfRange { chain: chain.id, mention: *mention });
            }
            if let Some(&other) = span_owner.get(mention) {
                violations.push(Violation::SharedMention {
                    mention: *mention,
                    chains: (other, chain.id),
                });
            } else {
                span_owner.insert(*mention, chain.id);
            }
        }
        // Document order: strictly increasing by (sentence, start).
        let ordered = chain
            .mentions
            .windows(2)
            .all(|w| (w[0].sentence, w[0].start) < (w[1].sentence, w[1].start));
        if !ordered {
            violations.push(Violation::UnorderedChain { chain: chain.id });
        }
    }

    for (i, name) in story.roster.iter().enumerate() {
        if name.canonical.is_empty() {
            violations.push(Violation::EmptyCharacterName { index: i });
        }
    }
    if let Some(seq) = &story.images {
        for (i, image) in seq.images.iter().enumerate() {
            for bx in image.boxes.iter().flatten() {
                if !(0.0..=1.0).contains(&bx.relative_area) {
                    violations.push(Violation::BoxAreaOutOfRange {
                        image: i,
                        character: bx.character.clone(),
                    });
                }
            }
        }
    }

    violations
}

/// Per-sentence sets of character chains: entry `s` holds the ids of the
/// character chains with at least one mention in sentence `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceChainIndex {
    pub per_sentence: Vec<BTreeSet<ChainId>>,
}

impl SentenceChainIndex {
    pub fn sentence_count(&self) -> usize {
        self.per_sentence.len()
    }
}

/// Build the per-sentence chain membership index restricted to the given
/// character chains. Mentions of one chain within a sentence collapse to a
/// single membership.
pub fn sentence_chain_index(
    story: &Story,
    character_chains: &BTreeSet<ChainId>,
) -> Result<SentenceChainIndex, InputError> {
    let known = story.chain_ids();
    if let Some(unknown) = character_chains.iter().find(|id| !known.contains(id)) {
        return Err(InputError::new(format!("unknown chain id {unknown}")));
    }

    let mut per_sentence = vec![BTreeSet::new(); story.sentences.len()];
    for chain in &story.chains {
        if !character_chains.contains(&chain.id) {
            continue;
        }
        for mention in &chain.mentions {
            if let Some(set) = per_sentence.get_mut(mention.sentence) {
                set.insert(chain.id);
            }
        }
    }
    Ok(SentenceChainIndex { per_sentence })
}

/// Surface statistics of one story.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descriptives {
    /// Sentence count.
    pub sentences: usize,
    /// Total token count, punctuation included.
    pub words: usize,
    /// Token positions covered by at least one mention of any chain;
    /// overlapping and nested spans count each position once.
    pub words_as_mentions: usize,
}

/// Compute sentence, word, and words-as-mentions counts.
pub fn story_descriptives(story: &Story) -> Descriptives {
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    for chain in &story.chains {
        for mention in &chain.mentions {
            let len = story.sentences.get(mention.sentence).map(Vec::len).unwrap_or(0);
            for tok in mention.start..=mention.end.min(len.saturating_sub(1)) {
                if tok < len {
                    covered.insert((mention.sentence, tok));
                }
            }
        }
    }
    Descriptives {
        sentences: story.sentence_count(),
        words: story.token_count(),
        words_as_mentions: covered.len(),
    }
}
