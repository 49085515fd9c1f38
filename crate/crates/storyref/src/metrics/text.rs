//! Sentence-level character continuity metrics and chain-shape statistics.
//!
//! The transition metrics operate on the per-sentence character chain sets
//! (`C_s`): for each consecutive sentence pair they record whether a
//! character carries over, which fraction drops out, which fraction is new,
//! and whether the cast changes completely. Reappearance measures how far
//! apart a chain's first and last sentences lie. All story-level values are
//! means over the defined pairs or chains; a metric whose denominator set is
//! empty is absent, never zero.

use std::collections::BTreeMap;

use crate::model::{SentenceChainIndex, Story};

/// Per-pair transition facts for one consecutive sentence pair `(s, s+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionRecord {
    /// Index `s` of the pair.
    pub pair: usize,
    /// Whether the two sentences share at least one character chain.
    pub shares_character: bool,
    /// Fraction of `C_s` absent from `C_{s+1}`; defined when `C_s` is non-empty.
    pub drop_ratio: Option<f64>,
    /// Fraction of `C_{s+1}` absent from `C_s`; defined when `C_{s+1}` is non-empty.
    pub add_ratio: Option<f64>,
    /// Whether the cast changed completely; defined when both sets are non-empty.
    pub complete_change: Option<bool>,
    /// Size of the intersection, for the count-variant transition score.
    pub shared: usize,
}

/// Compute the `N-1` transition records of a story.
pub fn transitions(index: &SentenceChainIndex) -> Vec<TransitionRecord> {
    let per = &index.per_sentence;
    let mut records = Vec::with_capacity(per.len().saturating_sub(1));
    for s in 0..per.len().saturating_sub(1) {
        let current = &per[s];
        let next = &per[s + 1];
        let shared = current.intersection(next).count();
        records.push(TransitionRecord {
            pair: s,
            shares_character: shared > 0,
            drop_ratio: (!current.is_empty())
                .then(|| (current.len() - shared) as f64 / current.len() as f64),
            add_ratio: (!next.is_empty())
                .then(|| (next.len() - shared) as f64 / next.len() as f64),
            complete_change: (!current.is_empty() && !next.is_empty()).then_some(shared == 0),
            shared,
        });
    }
    records
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

/// Fraction of consecutive sentence pairs sharing at least one character.
/// Absent for single-sentence stories.
pub fn char_transition(index: &SentenceChainIndex) -> Option<f64> {
    let records = transitions(index);
    mean_of(records.iter().map(|r| if r.shares_character { 1.0 } else { 0.0 }))
}

/// Mean number of characters shared per consecutive sentence pair.
///
/// Count variant of [`char_transition`]: sums intersection sizes instead of
/// a 0/1 indicator, so values above 1 are possible. Reported separately and
/// not interchangeable with the indicator mean.
pub fn char_transition_count(index: &SentenceChainIndex) -> Option<f64> {
    let records = transitions(index);
    mean_of(records.iter().map(|r| r.shared as f64))
}

/// Mean fraction of characters that disappear from one sentence to the next,
/// over pairs with a non-empty current cast.
pub fn char_drop(index: &SentenceChainIndex) -> Option<f64> {
    mean_of(transitions(index).iter().filter_map(|r| r.drop_ratio))
}

/// Mean fraction of characters new to the next sentence, over pairs with a
/// non-empty next cast.
pub fn char_add(index: &SentenceChainIndex) -> Option<f64> {
    mean_of(transitions(index).iter().filter_map(|r| r.add_ratio))
}

/// Fraction of pairs with a complete cast change, over pairs where both
/// sentences have characters.
pub fn char_change(index: &SentenceChainIndex) -> Option<f64> {
    mean_of(
        transitions(index)
            .iter()
            .filter_map(|r| r.complete_change.map(|c| if c { 1.0 } else { 0.0 })),
    )
}

/// Mean normalized spread between each character chain's first and last
/// sentence. A chain confined to one sentence contributes 0; a chain
/// spanning the whole story contributes 1. Absent for single-sentence
/// stories and stories without character chains.
pub fn char_reappearance(index: &SentenceChainIndex) -> Option<f64> {
    let n = index.sentence_count();
    if n < 2 {
        return None;
    }
    let mut bounds: BTreeMap<_, (usize, usize)> = BTreeMap::new();
    for (s, set) in index.per_sentence.iter().enumerate() {
        for id in set {
            bounds
                .entry(*id)
                .and_modify(|(_, max)| *max = s)
                .or_insert((s, s));
        }
    }
    mean_of(
        bounds
            .values()
            .map(|(min, max)| (max - min) as f64 / (n - 1) as f64),
    )
}

/// Document-order extent of each chain, as (first, last) global mention
/// positions over the concatenation of all mentions.
fn chain_extents(story: &Story) -> Vec<(usize, usize)> {
    let mut all: Vec<(usize, usize, usize, usize)> = Vec::new(); // (sentence, start, end, chain index)
    for (ci, chain) in story.chains.iter().enumerate() {
        for m in &chain.mentions {
            all.push((m.sentence, m.start, m.end, ci));
        }
    }
    all.sort();
    let mut extents: Vec<Option<(usize, usize)>> = vec![None; story.chains.len()];
    for (pos, &(_, _, _, ci)) in all.iter().enumerate() {
        extents[ci] = Some(match extents[ci] {
            None => (pos, pos),
            Some((first, _)) => (first, pos),
        });
    }
    extents.into_iter().flatten().collect()
}

/// Chain Crossing Index: the number of chain pairs whose document-order
/// extents partially overlap — they intersect while neither contains the
/// other — normalized by the chain count. Computed over all chains, not
/// only character chains. Absent when the story has fewer than two chains.
pub fn chain_crossing_index(story: &Story) -> Option<f64> {
    let extents = chain_extents(story);
    if extents.len() < 2 {
        return None;
    }
    let mut crossings = 0usize;
    for i in 0..extents.len() {
        for j in i + 1..extents.len() {
            let (a1, b1) = extents[i];
            let (a2, b2) = extents[j];
            let disjoint = b1 < a2 || b2 < a1;
            let contained = (a1 <= a2 && b2 <= b1) || (a2 <= a1 && b1 <= b2);
            if !disjoint && !contained {
                crossings += 1;
            }
        }
    }
    Some(crossings as f64 / extents.len() as f64)
}

/// Number of chains and mean mentions per chain, over all chains.
pub fn chain_size_stats(story: &Story) -> (usize, Option<f64>) {
    let n = story.chains.len();
    let mean = (n > 0).then(|| {
        story.chains.iter().map(|c| c.mentions.len()).sum::<usize>() as f64 / n as f64
    });
    (n, mean)
}

/// All per-story text metrics. Fields are `None` when undefined, which is
/// distinct from zero: a single-sentence story has no transition value at
/// all, while a two-sentence story without carryover scores 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StoryTextMetrics {
    pub transition: Option<f64>,
    pub transition_count: Option<f64>,
    pub drop_rate: Option<f64>,
    pub addition_rate: Option<f64>,
    pub change_rate: Option<f64>,
    pub reappearance: Option<f64>,
    pub crossing_index: Option<f64>,
    pub num_chains: usize,
    pub mean_chain_size: Option<f64>,
}

/// Assemble the full text-metric set for one story given its character
/// chain index.
pub fn text_metrics(story: &Story, index: &SentenceChainIndex) -> StoryTextMetrics {
    let (num_chains, mean_chain_size) = chain_size_stats(story);
    StoryTextMetrics {
        transition: char_transition(index),
        transition_count: char_transition_count(index),
        drop_rate: char_drop(index),
        addition_rate: char_add(index),
        change_rate: char_change(index),
        reappearance: char_reappearance(index),
        crossing_index: chain_crossing_index(story),
        num_chains,
        mean_chain_size,
    }
}
