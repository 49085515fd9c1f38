//! Synthetic annotated stories with analytically known metric values.
//!
//! The generator builds stories from presence patterns whose metrics are
//! computed twice: once by the metrics modules over the realized story, and
//! once here from the pattern matrices by an independent route (closed
//! forms for the dense pattern, direct set arithmetic otherwise). The test
//! suite holds the two routes equal.
//!
//! Randomness comes from a self-contained splitmix-style PRNG rather than a
//! library RNG so fixtures reproduce bit-exactly from the documented
//! constants in any language.

use crate::error::InputError;
use crate::ingest::StoryBundle;
use crate::metrics::text::StoryTextMetrics;
use crate::model::{
    Chain, ChainId, CharacterName, ImageAppearance, ImageSequence, Mention, Story,
};

/// SplitMix64: state advances by the golden-ratio increment
/// 0x9E3779B97F4A7C15 and is finalized with the murmur-style mixer
/// (shifts 30/27/31, multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1): the top 53 bits scaled by 2^-53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in 0..n via modulo; the slight bias is irrelevant here and
    /// keeps the generator trivial to port.
    pub fn next_below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

/// Which sentences (or images) each character occupies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PresencePattern {
    /// Every character in every slot.
    Dense,
    /// Character `c` occupies slots congruent to `c` modulo the cast size.
    Alternating,
    /// Consecutive equal blocks, one character per block.
    Block,
    /// Independent coin flips with the given probability.
    Random(f64),
}

/// How each chain's mentions are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealizationPattern {
    /// Every mention is the character's name; such chains never change form.
    ConstantName,
    /// Every mention is a pronoun: the chain never matches the roster and
    /// stays unlabeled, exercising the absent-metric paths.
    ConstantPronoun,
    /// Names and pronouns alternate, forcing a form change on chains with
    /// two or more mentions.
    Alternating,
}

/// Generation parameters. The same seed always produces the same bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub seed: u64,
    pub n_sentences: usize,
    pub n_characters: usize,
    pub presence: PresencePattern,
    pub realization: RealizationPattern,
    pub images: PresencePattern,
}

/// Metric values computed from the pattern matrices, independently of the
/// metrics modules.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedMetrics {
    pub text: StoryTextMetrics,
    pub mcc: Option<f64>,
    pub rec: Option<f64>,
    pub words: usize,
    pub words_as_mentions: usize,
}

const SYNTH_NAMES: [&str; 12] = [
    "Ann", "Ben", "Cara", "Dev", "Elle", "Finn", "Gail", "Hugo", "Iris", "Jude", "Kira", "Liam",
];

fn character_name(i: usize) -> String {
    SYNTH_NAMES
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("Extra{i}"))
}

fn pronoun_for(i: usize) -> &'static str {
    if i.is_multiple_of(2) {
        "he"
    } else {
        "she"
    }
}

/// Presence matrix `[character][slot]` for one pattern, drawing coin flips
/// from `rng` (characters outer, slots inner) for the random pattern.
fn presence_matrix(
    pattern: PresencePattern,
    cast: usize,
    slots: usize,
    rng: &mut SplitMix64,
) -> Vec<Vec<bool>> {
    (0..cast)
        .map(|c| {
            (0..slots)
                .map(|s| match pattern {
                    PresencePattern::Dense => true,
                    PresencePattern::Alternating => s % cast == c,
                    PresencePattern::Block => s * cast / slots == c,
                    PresencePattern::Random(p) => rng.chance(p),
                })
                .collect()
        })
        .collect()
}

fn validate_params(params: &SynthParams) -> Result<(), InputError> {
    if params.n_sentences == 0 {
        return Err(InputError::new("n_sentences must be at least 1"));
    }
    for pattern in [params.presence, params.images] {
        if let PresencePattern::Random(p) = pattern {
            if !(0.0..=1.0).contains(&p) {
                return Err(InputError::new("random presence probability must lie in [0, 1]"));
            }
        }
    }
    Ok(())
}

/// Generate a deterministic synthetic story together with its expected
/// metric values. The image sequence has as many slots as the story has
/// sentences, mirroring the alignment of visual-story corpora.
pub fn generate(params: &SynthParams) -> Result<(StoryBundle, ExpectedMetrics), InputError> {
    validate_params(params)?;
    let cast = params.n_characters;
    let n = params.n_sentences;
    let mut rng = SplitMix64::new(params.seed);

    // Draw order is fixed: text presence first, then image presence.
    let presence = presence_matrix(params.presence, cast, n, &mut rng);
    let image_presence = presence_matrix(params.images, cast, n, &mut rng);

    let roster: Vec<CharacterName> =
        (0..cast).map(|c| CharacterName::new(character_name(c))).collect();

    // Realize sentences: one single-token mention per present character, in
    // cast order, followed by filler tokens.
    let mut sentences: Vec<Vec<String>> = Vec::with_capacity(n);
    let mut chains: Vec<Chain> = (0..cast).map(|c| Chain::new(ChainId(c as u32), vec![])).collect();
    let mut mention_counts = vec![0usize; cast];
    #[allow(clippy::needless_range_loop)]
    for s in 0..n {
        let mut tokens: Vec<String> = Vec::new();
        for c in 0..cast {
            if !presence[c][s] {
                continue;
            }
            let k = mention_counts[c];
            mention_counts[c] += 1;
            let token = match params.realization {
                RealizationPattern::ConstantName => character_name(c),
                RealizationPattern::ConstantPronoun => pronoun_for(c).to_string(),
                RealizationPattern::Alternating => {
                    if k.is_multiple_of(2) {
                        character_name(c)
                    } else {
                        pronoun_for(c).to_string()
                    }
                }
            };
            let position = tokens.len();
            tokens.push(token);
            chains[c].mentions.push(Mention::new(s, position, position));
        }
        if tokens.is_empty() {
            tokens.extend(["nothing", "happened", "."].map(str::to_string));
        } else {
            tokens.extend(["and", "so", "."].map(str::to_string));
        }
        sentences.push(tokens);
    }
    chains.retain(|c| !c.mentions.is_empty());

    let images = ImageSequence::new(
        (0..n)
            .map(|j| {
                let present: Vec<String> = (0..cast)
                    .filter(|&c| image_presence[c][j])
                    .map(character_name)
                    .collect();
                ImageAppearance::new(format!("img{j}"), present)
            })
            .collect(),
    );

    let story = Story {
        story_id: format!("synth-{:016x}", params.seed),
        sentences,
        chains,
        roster,
        images: Some(images),
    };

    let expected = expected_metrics(params, &presence, &image_presence);
    Ok((StoryBundle::new(story, "synthetic"), expected))
}

// ---------------------------------------------------------------------------
// Expected-value route, independent of the metrics modules.
// ---------------------------------------------------------------------------

fn expected_metrics(
    params: &SynthParams,
    presence: &[Vec<bool>],
    image_presence: &[Vec<bool>],
) -> ExpectedMetrics {
    let n = params.n_sentences;
    let cast = params.n_characters;
    let labeled = params.realization != RealizationPattern::ConstantPronoun;

    match (params.presence, params.images, labeled) {
        (PresencePattern::Dense, PresencePattern::Dense, true) => {
            dense_closed_forms(n, cast, params.realization)
        }
        _ => matrix_metrics(params, presence, image_presence),
    }
}

/// Closed forms for the fully dense, labeled configuration: every character
/// in every sentence and image.
fn dense_closed_forms(
    n: usize,
    cast: usize,
    realization: RealizationPattern,
) -> ExpectedMetrics {
    let pairs = n >= 2;
    let has_cast = cast > 0;
    let text = StoryTextMetrics {
        transition: pairs.then_some(if has_cast { 1.0 } else { 0.0 }),
        transition_count: pairs.then_some(cast as f64),
        drop_rate: (pairs && has_cast).then_some(0.0),
        addition_rate: (pairs && has_cast).then_some(0.0),
        change_rate: (pairs && has_cast).then_some(0.0),
        reappearance: (pairs && has_cast).then_some(1.0),
        // With every chain in every sentence, mentions interleave in cast
        // order, so every pair of chains crosses: C(k,2)/k pairs per chain.
        // A single-sentence story has singleton extents, which are disjoint.
        crossing_index: (cast >= 2).then(|| {
            if pairs {
                (cast - 1) as f64 / 2.0
            } else {
                0.0
            }
        }),
        num_chains: cast,
        mean_chain_size: has_cast.then_some(n as f64),
    };
    let rec_per_chain = match realization {
        RealizationPattern::ConstantName => 0.0,
        RealizationPattern::Alternating if n >= 2 => 1.0,
        RealizationPattern::Alternating => 0.0,
        RealizationPattern::ConstantPronoun => unreachable!("unlabeled handled elsewhere"),
    };
    ExpectedMetrics {
        text,
        mcc: has_cast.then_some(1.0),
        rec: has_cast.then_some(rec_per_chain),
        words: n * (cast + 3).max(3),
        words_as_mentions: n * cast,
    }
}

/// General route: direct set arithmetic over the pattern matrices.
fn matrix_metrics(
    params: &SynthParams,
    presence: &[Vec<bool>],
    image_presence: &[Vec<bool>],
) -> ExpectedMetrics {
    let n = params.n_sentences;
    let cast = params.n_characters;
    let labeled = params.realization != RealizationPattern::ConstantPronoun;

    let chain_exists: Vec<bool> = (0..cast).map(|c| presence[c].iter().any(|&p| p)).collect();
    // C_s over labeled chains only.
    let cast_of = |s: usize| -> Vec<usize> {
        (0..cast).filter(|&c| labeled && presence[c][s]).collect()
    };

    // Transition family.
    let mut shares = Vec::new();
    let mut shared_counts = Vec::new();
    let mut drops = Vec::new();
    let mut adds = Vec::new();
    let mut changes = Vec::new();
    for s in 0..n.saturating_sub(1) {
        let current = cast_of(s);
        let next = cast_of(s + 1);
        let shared = current.iter().filter(|c| next.contains(c)).count();
        shares.push(if shared > 0 { 1.0 } else { 0.0 });
        shared_counts.push(shared as f64);
        if !current.is_empty() {
            drops.push((current.len() - shared) as f64 / current.len() as f64);
        }
        if !next.is_empty() {
            adds.push((next.len() - shared) as f64 / next.len() as f64);
        }
        if !current.is_empty() && !next.is_empty() {
            changes.push(if shared == 0 { 1.0 } else { 0.0 });
        }
    }
    let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);

    // Reappearance over labeled chains.
    let reappearance = if n >= 2 {
        let spreads: Vec<f64> = (0..cast)
            .filter(|&c| labeled && chain_exists[c])
            .map(|c| {
                let first = presence[c].iter().position(|&p| p).unwrap();
                let last = presence[c].iter().rposition(|&p| p).unwrap();
                (last - first) as f64 / (n - 1) as f64
            })
            .collect();
        mean(&spreads)
    } else {
        None
    };

    // Crossing index over all chains: global mention positions follow
    // (sentence, cast order).
    let mut extents: Vec<(usize, usize)> = Vec::new();
    {
        let mut position = 0usize;
        let mut bounds: Vec<Option<(usize, usize)>> = vec![None; cast];
        #[allow(clippy::needless_range_loop)]
        for s in 0..n {
            for (c, bound) in bounds.iter_mut().enumerate() {
                if presence[c][s] {
                    *bound = Some(match bound {
                        None => (position, position),
                        Some((first, _)) => (*first, position),
                    });
                    position += 1;
                }
            }
        }
        extents.extend(bounds.into_iter().flatten());
    }
    let crossing_index = (extents.len() >= 2).then(|| {
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
        crossings as f64 / extents.len() as f64
    });

    let num_chains = chain_exists.iter().filter(|&&e| e).count();
    let total_mentions: usize =
        presence.iter().map(|row| row.iter().filter(|&&p| p).count()).sum();
    let mean_chain_size = (num_chains > 0).then(|| total_mentions as f64 / num_chains as f64);

    // MCC: labeled text presence vs image presence per roster character.
    let mut consistencies = Vec::new();
    for c in 0..cast {
        let text_span = labeled
            .then(|| span_continuity_of(&presence[c]))
            .flatten();
        let image_span = span_continuity_of(&image_presence[c]);
        if text_span.is_none() && image_span.is_none() {
            continue;
        }
        consistencies.push(1.0 - (text_span.unwrap_or(0.0) - image_span.unwrap_or(0.0)).abs());
    }
    let mcc = mean(&consistencies);

    // REC: a labeled chain changes form iff realization alternates and the
    // chain has at least two mentions.
    let rec = if labeled {
        let per_chain: Vec<f64> = (0..cast)
            .filter(|&c| chain_exists[c])
            .map(|c| {
                let mentions = presence[c].iter().filter(|&&p| p).count();
                match params.realization {
                    RealizationPattern::Alternating if mentions >= 2 => 1.0,
                    _ => 0.0,
                }
            })
            .collect();
        mean(&per_chain)
    } else {
        None
    };

    let words: usize = (0..n)
        .map(|s| {
            let mentions = (0..cast).filter(|&c| presence[c][s]).count();
            if mentions == 0 {
                3
            } else {
                mentions + 3
            }
        })
        .sum();

    ExpectedMetrics {
        text: StoryTextMetrics {
            transition: mean(&shares),
            transition_count: mean(&shared_counts),
            drop_rate: mean(&drops),
            addition_rate: mean(&adds),
            change_rate: mean(&changes),
            reappearance,
            crossing_index,
            num_chains,
            mean_chain_size,
        },
        mcc,
        rec,
        words,
        words_as_mentions: total_mentions,
    }
}

fn span_continuity_of(presence: &[bool]) -> Option<f64> {
    let first = presence.iter().position(|&p| p)?;
    let last = presence.iter().rposition(|&p| p)?;
    let count = presence.iter().filter(|&&p| p).count();
    Some(count as f64 / (last - first + 1) as f64)
}

// ---------------------------------------------------------------------------
// Perturbations
// ---------------------------------------------------------------------------

/// Structure-preserving story edits for sensitivity tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbOp {
    /// Permute sentence order with the given shuffle seed.
    ShuffleSentences { seed: u64 },
    /// Split the first chain with at least two mentions into two chains.
    SplitChain,
    /// Merge the first pair of chains whose union stays strictly ordered.
    MergeChains,
    /// Replace every non-first mention with a single pronoun token, forcing
    /// a form change on multi-mention named chains.
    PronominalizeAll,
}

/// Apply one perturbation, returning a structurally valid story.
pub fn perturb(bundle: &StoryBundle, op: PerturbOp) -> Result<StoryBundle, InputError> {
    let mut out = bundle.clone();
    match op {
        PerturbOp::ShuffleSentences { seed } => shuffle_sentences(&mut out.story, seed),
        PerturbOp::SplitChain => split_chain(&mut out.story)?,
        PerturbOp::MergeChains => merge_chains(&mut out.story)?,
        PerturbOp::PronominalizeAll => pronominalize_all(&mut out.story)?,
    }
    Ok(out)
}

fn shuffle_sentences(story: &mut Story, seed: u64) {
    let n = story.sentences.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = SplitMix64::new(seed);
    for i in (1..n).rev() {
        let j = rng.next_below((i + 1) as u64) as usize;
        order.swap(i, j);
    }
    // order[new] = old; mentions need old -> new.
    let mut new_of_old = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        new_of_old[old] = new;
    }
    let mut sentences = vec![Vec::new(); n];
    for (new, &old) in order.iter().enumerate() {
        sentences[new] = std::mem::take(&mut story.sentences[old]);
    }
    story.sentences = sentences;
    for chain in &mut story.chains {
        for mention in &mut chain.mentions {
            mention.sentence = new_of_old[mention.sentence];
        }
        chain.mentions.sort();
    }
}

fn split_chain(story: &mut Story) -> Result<(), InputError> {
    let target = story
        .chains
        .iter()
        .position(|c| c.mentions.len() >= 2)
        .ok_or_else(|| InputError::new("split_chain needs a chain with at least 2 mentions"))?;
    let fresh = ChainId(story.chains.iter().map(|c| c.id.0).max().unwrap_or(0) + 1);
    let mentions = &mut story.chains[target].mentions;
    let tail = mentions.split_off(mentions.len() / 2);
    story.chains.push(Chain::new(fresh, tail));
    Ok(())
}

fn merge_chains(story: &mut Story) -> Result<(), InputError> {
    if story.chains.len() < 2 {
        return Err(InputError::new("merge_chains needs at least 2 chains"));
    }
    let mut ids: Vec<ChainId> = story.chains.iter().map(|c| c.id).collect();
    ids.sort();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let a = story.chain(ids[i]).unwrap();
            let b = story.chain(ids[j]).unwrap();
            let mut merged = a.mentions.clone();
            merged.extend(b.mentions.iter().copied());
            merged.sort();
            let ordered = merged
                .windows(2)
                .all(|w| (w[0].sentence, w[0].start) < (w[1].sentence, w[1].start));
            if !ordered {
                continue;
            }
            let (keep, remove) = (ids[i], ids[j]);
            story.chains.retain(|c| c.id != remove);
            story
                .chains
                .iter_mut()
                .find(|c| c.id == keep)
                .expect("kept chain present")
                .mentions = merged;
            return Ok(());
        }
    }
    Err(InputError::new("merge_chains found no pair with strictly ordered union"))
}

fn pronominalize_all(story: &mut Story) -> Result<(), InputError> {
    // Targets: every non-first mention of every chain.
    let mut targets: Vec<Mention> = Vec::new();
    let mut all: Vec<Mention> = Vec::new();
    for chain in &story.chains {
        all.extend(chain.mentions.iter().copied());
        targets.extend(chain.mentions.iter().skip(1).copied());
    }
    let overlaps = |a: &Mention, b: &Mention| {
        a.sentence == b.sentence && a.start <= b.end && b.start <= a.end
    };
    for t in &targets {
        if all.iter().any(|m| m != t && overlaps(m, t)) {
            return Err(InputError::new(
                "pronominalize_all is inapplicable to overlapping mention spans",
            ));
        }
    }

    for s in 0..story.sentences.len() {
        let mut spans: Vec<Mention> = targets.iter().filter(|m| m.sentence == s).copied().collect();
        spans.sort();
        if spans.is_empty() {
            continue;
        }
        // Rewrite tokens and track position shifts.
        let old_tokens = std::mem::take(&mut story.sentences[s]);
        let old_len = old_tokens.len();
        let mut new_tokens: Vec<String> = Vec::with_capacity(old_len);
        let mut new_start_of_old = vec![0usize; old_len + 1];
        for (old_pos, token) in old_tokens.into_iter().enumerate() {
            new_start_of_old[old_pos] = new_tokens.len();
            match spans.iter().find(|m| (m.start..=m.end).contains(&old_pos)) {
                Some(span) if old_pos == span.start => {
                    new_tokens.push("they".to_string());
                }
                Some(_) => {} // interior token of a replaced span
                None => new_tokens.push(token),
            }
        }
        new_start_of_old[old_len] = new_tokens.len();
        story.sentences[s] = new_tokens;

        for chain in &mut story.chains {
            for mention in &mut chain.mentions {
                if mention.sentence != s {
                    continue;
                }
                if spans.contains(mention) {
                    let start = new_start_of_old[mention.start];
                    *mention = Mention::new(s, start, start);
                } else {
                    let start = new_start_of_old[mention.start];
                    let end = new_start_of_old[mention.end];
                    *mention = Mention::new(s, start, end);
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Planted-correlation calibration pairs
// ---------------------------------------------------------------------------

/// Pairs of standard-normal metric values with the given planted
/// correlation, via `b = rho * a + sqrt(1 - rho^2) * noise`.
pub fn planted_correlation(seed: u64, n: usize, rho: f64) -> Vec<(f64, f64)> {
    let mut rng = SplitMix64::new(seed);
    let mut gauss_pair = move || {
        let u1 = 1.0 - rng.next_f64(); // (0, 1]
        let u2 = rng.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        (radius * angle.cos(), radius * angle.sin())
    };
    (0..n)
        .map(|_| {
            let (z1, z2) = gauss_pair();
            (z1, rho * z1 + (1.0 - rho * rho).sqrt() * z2)
        })
        .collect()
}
