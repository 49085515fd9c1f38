//! Character chain labeling and mention realization.
//!
//! A coreference chain denotes a named character when at least one of its
//! mentions contains a token matching the character's name or an alias.
//! Each mention is additionally classified by surface form: proper name,
//! pronoun, both, or other.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, BufRead};
use std::path::Path;

use crate::error::InputError;
use crate::model::{Chain, ChainId, CharacterName, Mention, Story};

/// Built-in English pronoun list, one token per line.
const DEFAULT_PRONOUNS: &str = include_str!("data/pronouns.txt");

/// Closed set of pronoun tokens used for realization classification.
///
/// The default is the embedded English list; load a replacement with
/// [`PronounLexicon::from_path`] to adapt the pipeline to another language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounLexicon {
    tokens: BTreeSet<String>,
}

impl PronounLexicon {
    pub fn from_reader(reader: impl BufRead) -> io::Result<Self> {
        let mut tokens = BTreeSet::new();
        for line in reader.lines() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            tokens.insert(trimmed.to_lowercase());
        }
        Ok(PronounLexicon { tokens })
    }

    pub fn from_path(path: impl AsRef<Path>) -> io::Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(io::BufReader::new(file))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.tokens.contains(&token.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl Default for PronounLexicon {
    fn default() -> Self {
        Self::from_reader(DEFAULT_PRONOUNS.as_bytes()).expect("embedded lexicon is well-formed")
    }
}

/// Surface form of one mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Realization {
    /// Contains a roster name or alias token.
    Name,
    /// Contains a pronoun token.
    Pronoun,
    /// Contains both a name and a pronoun token.
    Both,
    /// Anything else, e.g. a common-noun description.
    Other,
}

impl std::fmt::Display for Realization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Realization::Name => "N",
            Realization::Pronoun => "P",
            Realization::Both => "Both",
            Realization::Other => "Other",
        };
        f.write_str(s)
    }
}

/// Realization of every mention of one chain, in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationSequence {
    pub chain_id: ChainId,
    pub sequence: Vec<Realization>,
}

/// Partition of a story's chains into character-labeled and unlabeled.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CharacterChainSet {
    pub assignments: BTreeMap<ChainId, CharacterName>,
    pub unlabeled: BTreeSet<ChainId>,
}

impl CharacterChainSet {
    pub fn character_chain_ids(&self) -> BTreeSet<ChainId> {
        self.assignments.keys().copied().collect()
    }

    /// Ids of the chains assigned to the given character.
    pub fn chains_for(&self, character: &CharacterName) -> BTreeSet<ChainId> {
        self.assignments
            .iter()
            .filter(|(_, name)| name.canonical == character.canonical)
            .map(|(id, _)| *id)
            .collect()
    }
}

/// Drop a trailing possessive clitic ("'s" or "\u{2019}s") from a token.
/// Resolver output usually tokenizes the clitic separately, but attached
/// forms occur in other tokenizations.
fn strip_possessive(token: &str) -> &str {
    for clitic in ["'s", "\u{2019}s"] {
        if let Some(stem) = token.strip_suffix(clitic) {
            if !stem.is_empty() {
                return stem;
            }
        }
    }
    token
}

/// Whether a token is itself a bare possessive clitic.
fn is_possessive_clitic(token: &str) -> bool {
    token == "'s" || token == "\u{2019}s"
}

fn token_names_character(token: &str, character: &CharacterName) -> bool {
    !is_possessive_clitic(token) && character.matches(strip_possessive(token))
}

/// Roster indices of the characters named by any token of the mention.
fn mention_character_matches(
    story: &Story,
    mention: &Mention,
    roster: &[CharacterName],
) -> Vec<usize> {
    let tokens = story.mention_tokens(mention);
    roster
        .iter()
        .enumerate()
        .filter(|(_, name)| tokens.iter().any(|t| token_names_character(t, name)))
        .map(|(i, _)| i)
        .collect()
}

/// Label each chain with the character it refers to, if any.
///
/// A chain is assigned to a character when at least one mention contains a
/// token matching the character's name or an alias, case-insensitively and
/// ignoring a trailing possessive clitic. A chain matching several
/// characters goes to the one matching the most mentions, ties broken by
/// earliest first match; a chain whose every matching mention names two or
/// more characters is a group reference and stays unlabeled.
pub fn match_character_chains(story: &Story, roster: &[CharacterName]) -> CharacterChainSet {
    let mut result = CharacterChainSet::default();

    for chain in &story.chains {
        let per_mention: Vec<Vec<usize>> = chain
            .mentions
            .iter()
            .map(|m| mention_character_matches(story, m, roster))
            .collect();

        let matching: Vec<&Vec<usize>> = per_mention.iter().filter(|m| !m.is_empty()).collect();
        let is_group = !matching.is_empty() && matching.iter().all(|m| m.len() >= 2);
        if matching.is_empty() || is_group {
            result.unlabeled.insert(chain.id);
            continue;
        }

        // (match count, position of first match) per candidate character.
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        let mut first_match: BTreeMap<usize, usize> = BTreeMap::new();
        for (mention_idx, chars) in per_mention.iter().enumerate() {
            for &c in chars {
                *counts.entry(c).or_insert(0) += 1;
                first_match.entry(c).or_insert(mention_idx);
            }
        }
        let best = counts
            .iter()
            .min_by_key(|(idx, count)| (std::cmp::Reverse(**count), first_match[idx], **idx))
            .map(|(idx, _)| *idx)
            .expect("at least one matching mention");
        result.assignments.insert(chain.id, roster[best].clone());
    }

    result
}

/// Classify one mention's surface form against the roster and lexicon.
pub fn classify_mention(
    story: &Story,
    mention: &Mention,
    roster: &[CharacterName],
    lexicon: &PronounLexicon,
) -> Realization {
    let tokens = story.mention_tokens(mention);
    let has_pronoun = tokens.iter().any(|t| lexicon.contains(t));
    let has_name = tokens
        .iter()
        .any(|t| roster.iter().any(|name| token_names_character(t, name)));
    match (has_name, has_pronoun) {
        (true, true) => Realization::Both,
        (true, false) => Realization::Name,
        (false, true) => Realization::Pronoun,
        (false, false) => Realization::Other,
    }
}

/// Classify every mention of a chain in document order.
pub fn realization_sequence(
    story: &Story,
    chain: &Chain,
    roster: &[CharacterName],
    lexicon: &PronounLexicon,
) -> Result<RealizationSequence, InputError> {
    if chain.mentions.is_empty() {
        return Err(InputError::new(format!("chain {} has no mentions", chain.id)));
    }
    let sequence = chain
        .mentions
        .iter()
        .map(|m| classify_mention(story, m, roster, lexicon))
        .collect();
    Ok(RealizationSequence { chain_id: chain.id, sequence })
}
