//! Brute-force reference evaluator, written against the metric definitions
//! and independent of the library's implementation path: it walks plain
//! vectors and recomputes every quantity from first principles, including
//! its own character-chain labeling and its own pronoun list.

use storyref::ingest::StoryBundle;
use storyref::model::{Chain, Story};

const PRONOUNS: [&str; 31] = [
    "i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself", "yourselves", "he",
    "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself", "we", "us",
    "our", "ours", "ourselves", "they", "them", "their", "theirs", "themselves",
];

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMetrics {
    pub sentences: usize,
    pub words: usize,
    pub words_as_mentions: usize,
    pub num_chains: usize,
    pub num_character_chains: usize,
    pub mean_chain_size: Option<f64>,
    pub cci: Option<f64>,
    pub char_tr: Option<f64>,
    pub char_tr_count: Option<f64>,
    pub char_dr: Option<f64>,
    pub char_ad: Option<f64>,
    pub char_ch: Option<f64>,
    pub char_re: Option<f64>,
    pub mcc: Option<f64>,
    pub rec: Option<f64>,
}

fn strip_clitic(token: &str) -> &str {
    for suffix in ["'s", "\u{2019}s"] {
        if token.len() > suffix.len() {
            if let Some(stem) = token.strip_suffix(suffix) {
                return stem;
            }
        }
    }
    token
}

fn token_is(token: &str, name: &str) -> bool {
    strip_clitic(token).to_lowercase() == name.to_lowercase()
}

/// Roster indices named by a token, aliases included.
fn token_characters(token: &str, story: &Story) -> Vec<usize> {
    if token == "'s" || token == "\u{2019}s" {
        return Vec::new();
    }
    story
        .roster
        .iter()
        .enumerate()
        .filter(|(_, name)| {
            token_is(token, &name.canonical) || name.aliases.iter().any(|a| token_is(token, a))
        })
        .map(|(i, _)| i)
        .collect()
}

fn mention_tokens(story: &Story, sentence: usize, start: usize, end: usize) -> &[String] {
    &story.sentences[sentence][start..=end]
}

/// Character chain labeling from first principles: the chain goes to the
/// most frequently matched character, ties to the earliest first match,
/// then roster order; chains whose matching mentions all name two or more
/// characters stay unlabeled.
fn label_chain(story: &Story, chain: &Chain) -> Option<usize> {
    let mut per_mention: Vec<Vec<usize>> = Vec::new();
    for m in &chain.mentions {
        let mut matched: Vec<usize> = Vec::new();
        for token in mention_tokens(story, m.sentence, m.start, m.end) {
            for c in token_characters(token, story) {
                if !matched.contains(&c) {
                    matched.push(c);
                }
            }
        }
        matched.sort();
        per_mention.push(matched);
    }
    let with_match: Vec<&Vec<usize>> = per_mention.iter().filter(|m| !m.is_empty()).collect();
    if with_match.is_empty() || with_match.iter().all(|m| m.len() >= 2) {
        return None;
    }
    let mut best: Option<usize> = None;
    let mut best_key = (0usize, usize::MAX, usize::MAX); // (count, -first, -index) compared manually
    for candidate in 0..story.roster.len() {
        let count = per_mention.iter().filter(|m| m.contains(&candidate)).count();
        if count == 0 {
            continue;
        }
        let first = per_mention.iter().position(|m| m.contains(&candidate)).unwrap();
        let better = count > best_key.0
            || (count == best_key.0 && first < best_key.1)
            || (count == best_key.0 && first == best_key.1 && candidate < best_key.2);
        if better {
            best = Some(candidate);
            best_key = (count, first, candidate);
        }
    }
    best
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

fn span_fraction(present: &[usize]) -> Option<f64> {
    let first = *present.first()?;
    let last = *present.last()?;
    Some(present.len() as f64 / (last - first + 1) as f64)
}

pub fn evaluate(bundle: &StoryBundle) -> OracleMetrics {
    let story = &bundle.story;
    let n = story.sentences.len();

    // Descriptives.
    let words: usize = story.sentences.iter().map(|s| s.len()).sum();
    let mut covered: Vec<(usize, usize)> = Vec::new();
    for chain in &story.chains {
        for m in &chain.mentions {
            for t in m.start..=m.end {
                if !covered.contains(&(m.sentence, t)) {
                    covered.push((m.sentence, t));
                }
            }
        }
    }

    // Labeling.
    let labels: Vec<Option<usize>> =
        story.chains.iter().map(|c| label_chain(story, c)).collect();
    let num_character_chains = labels.iter().filter(|l| l.is_some()).count();

    // Casts per sentence over labeled chains.
    let mut casts: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, chain) in story.chains.iter().enumerate() {
        if labels[idx].is_none() {
            continue;
        }
        for m in &chain.mentions {
            if !casts[m.sentence].contains(&idx) {
                casts[m.sentence].push(idx);
            }
        }
    }

    let mut shares = Vec::new();
    let mut counts = Vec::new();
    let mut drops = Vec::new();
    let mut adds = Vec::new();
    let mut changes = Vec::new();
    for s in 0..n.saturating_sub(1) {
        let shared = casts[s].iter().filter(|c| casts[s + 1].contains(c)).count();
        shares.push(if shared > 0 { 1.0 } else { 0.0 });
        counts.push(shared as f64);
        if !casts[s].is_empty() {
            drops.push((casts[s].len() - shared) as f64 / casts[s].len() as f64);
        }
        if !casts[s + 1].is_empty() {
            adds.push((casts[s + 1].len() - shared) as f64 / casts[s + 1].len() as f64);
        }
        if !casts[s].is_empty() && !casts[s + 1].is_empty() {
            changes.push(if shared == 0 { 1.0 } else { 0.0 });
        }
    }

    // Reappearance spread over labeled chains, in chain id order to match
    // the reported convention.
    let char_re = if n >= 2 {
        let mut order: Vec<usize> = (0..story.chains.len()).filter(|&i| labels[i].is_some()).collect();
        order.sort_by_key(|&i| story.chains[i].id);
        let spreads: Vec<f64> = order
            .iter()
            .map(|&i| {
                let ss: Vec<usize> = story.chains[i].mentions.iter().map(|m| m.sentence).collect();
                let (min, max) = (*ss.iter().min().unwrap(), *ss.iter().max().unwrap());
                (max - min) as f64 / (n - 1) as f64
            })
            .collect();
        mean(&spreads)
    } else {
        None
    };

    // Chain crossing over all chains: rank mentions by (sentence, start,
    // end) and compare extent intervals pairwise.
    let mut all_spans: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (idx, chain) in story.chains.iter().enumerate() {
        for m in &chain.mentions {
            all_spans.push((m.sentence, m.start, m.end, idx));
        }
    }
    all_spans.sort();
    let mut extent: Vec<Option<(usize, usize)>> = vec![None; story.chains.len()];
    for (rank, &(_, _, _, idx)) in all_spans.iter().enumerate() {
        extent[idx] = Some(match extent[idx] {
            None => (rank, rank),
            Some((lo, _)) => (lo, rank),
        });
    }
    let extents: Vec<(usize, usize)> = extent.into_iter().flatten().collect();
    let cci = if extents.len() >= 2 {
        let mut crossings = 0usize;
        for i in 0..extents.len() {
            for j in i + 1..extents.len() {
                let (a1, b1) = extents[i];
                let (a2, b2) = extents[j];
                let separate = b1 < a2 || b2 < a1;
                let nested = (a1 <= a2 && b2 <= b1) || (a2 <= a1 && b1 <= b2);
                if !separate && !nested {
                    crossings += 1;
                }
            }
        }
        Some(crossings as f64 / extents.len() as f64)
    } else {
        None
    };

    // Multimodal continuity per roster character, roster order.
    let mcc = match &story.images {
        None => None,
        Some(seq) => {
            let mut consistencies: Vec<f64> = Vec::new();
            for (c, name) in story.roster.iter().enumerate() {
                let mut text_presence: Vec<usize> = Vec::new();
                for (idx, chain) in story.chains.iter().enumerate() {
                    if labels[idx] != Some(c) {
                        continue;
                    }
                    for m in &chain.mentions {
                        if !text_presence.contains(&m.sentence) {
                            text_presence.push(m.sentence);
                        }
                    }
                }
                text_presence.sort();
                let label_is = |label: &str, target: &str| label.to_lowercase() == target.to_lowercase();
                let mut image_presence: Vec<usize> = Vec::new();
                for (j, image) in seq.images.iter().enumerate() {
                    let shown = image.characters.iter().any(|label| {
                        label_is(label, &name.canonical)
                            || name.aliases.iter().any(|a| label_is(label, a))
                    });
                    if shown {
                        image_presence.push(j);
                    }
                }
                let text = span_fraction(&text_presence);
                let image = span_fraction(&image_presence);
                if text.is_none() && image.is_none() {
                    continue;
                }
                consistencies.push(1.0 - (text.unwrap_or(0.0) - image.unwrap_or(0.0)).abs());
            }
            mean(&consistencies)
        }
    };

    // Referring expression change over labeled chains, chain id order.
    let rec = {
        let mut order: Vec<usize> =
            (0..story.chains.len()).filter(|&i| labels[i].is_some()).collect();
        order.sort_by_key(|&i| story.chains[i].id);
        let flags: Vec<f64> = order
            .iter()
            .map(|&i| {
                let kinds: Vec<u8> = story.chains[i]
                    .mentions
                    .iter()
                    .map(|m| {
                        let tokens = mention_tokens(story, m.sentence, m.start, m.end);
                        let has_name =
                            tokens.iter().any(|t| !token_characters(t, story).is_empty());
                        let has_pronoun = tokens
                            .iter()
                            .any(|t| PRONOUNS.contains(&t.to_lowercase().as_str()));
                        match (has_name, has_pronoun) {
                            (true, true) => 2,
                            (true, false) => 0,
                            (false, true) => 1,
                            (false, false) => 3,
                        }
                    })
                    .collect();
                if kinds.iter().any(|k| *k != kinds[0]) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        mean(&flags)
    };

    let num_chains = story.chains.len();
    let total_mentions: usize = story.chains.iter().map(|c| c.mentions.len()).sum();

    OracleMetrics {
        sentences: n,
        words,
        words_as_mentions: covered.len(),
        num_chains,
        num_character_chains,
        mean_chain_size: (num_chains > 0).then(|| total_mentions as f64 / num_chains as f64),
        cci,
        char_tr: mean(&shares),
        char_tr_count: mean(&counts),
        char_dr: mean(&drops),
        char_ad: mean(&adds),
        char_ch: mean(&changes),
        char_re,
        mcc,
        rec,
    }
}
