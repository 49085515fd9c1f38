//! Per-story metric reports: every metric value, defined or explicitly
//! absent, for one annotated story.
//!
//! Absent metrics serialize as JSON `null`, never as zero; conflating the
//! two would corrupt corpus macro-averages.

use serde::{Deserialize, Serialize};

use crate::error::InputError;
use crate::ingest::StoryBundle;
use crate::labeling::{match_character_chains, PronounLexicon};
use crate::metrics::multimodal::mcc;
use crate::metrics::rec::rec_story;
use crate::metrics::text::text_metrics;
use crate::model::{sentence_chain_index, story_descriptives};
use crate::stats::{pearson_pairwise, TestResult};

/// All per-story metric values plus descriptives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub story_id: String,
    pub source_label: String,
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

/// The metrics a report exposes by name, for aggregation and correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    Sentences,
    Words,
    WordsAsMentions,
    NumChains,
    NumCharacterChains,
    MeanChainSize,
    Cci,
    CharTr,
    CharTrCount,
    CharDr,
    CharAd,
    CharCh,
    CharRe,
    Mcc,
    Rec,
}

impl Metric {
    pub const ALL: [Metric; 15] = [
        Metric::Sentences,
        Metric::Words,
        Metric::WordsAsMentions,
        Metric::NumChains,
        Metric::NumCharacterChains,
        Metric::MeanChainSize,
        Metric::Cci,
        Metric::CharTr,
        Metric::CharTrCount,
        Metric::CharDr,
        Metric::CharAd,
        Metric::CharCh,
        Metric::CharRe,
        Metric::Mcc,
        Metric::Rec,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Sentences => "sentences",
            Metric::Words => "words",
            Metric::WordsAsMentions => "words_as_mentions",
            Metric::NumChains => "num_chains",
            Metric::NumCharacterChains => "num_character_chains",
            Metric::MeanChainSize => "mean_chain_size",
            Metric::Cci => "cci",
            Metric::CharTr => "char_tr",
            Metric::CharTrCount => "char_tr_count",
            Metric::CharDr => "char_dr",
            Metric::CharAd => "char_ad",
            Metric::CharCh => "char_ch",
            Metric::CharRe => "char_re",
            Metric::Mcc => "mcc",
            Metric::Rec => "rec",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Metric::ALL.iter().map(|m| m.name()).collect();
                InputError::new(format!("unknown metric {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl MetricReport {
    /// Value of one metric, `None` when the metric is absent for this story.
    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Sentences => Some(self.sentences as f64),
            Metric::Words => Some(self.words as f64),
            Metric::WordsAsMentions => Some(self.words_as_mentions as f64),
            Metric::NumChains => Some(self.num_chains as f64),
            Metric::NumCharacterChains => Some(self.num_character_chains as f64),
            Metric::MeanChainSize => self.mean_chain_size,
            Metric::Cci => self.cci,
            Metric::CharTr => self.char_tr,
            Metric::CharTrCount => self.char_tr_count,
            Metric::CharDr => self.char_dr,
            Metric::CharAd => self.char_ad,
            Metric::CharCh => self.char_ch,
            Metric::CharRe => self.char_re,
            Metric::Mcc => self.mcc,
            Metric::Rec => self.rec,
        }
    }
}

/// Run the full metric pipeline for one story: label character chains,
/// index them per sentence, and evaluate every metric.
pub fn compute_report(bundle: &StoryBundle, lexicon: &PronounLexicon) -> MetricReport {
    let story = &bundle.story;
    let assignments = match_character_chains(story, &story.roster);
    let character_chains = assignments.character_chain_ids();
    let index = sentence_chain_index(story, &character_chains)
        .expect("character chain ids come from the story itself");
    let text = text_metrics(story, &index);
    let descriptives = story_descriptives(story);
    let mcc_report = mcc(story, &assignments, story.images.as_ref(), &story.roster);
    let rec_report = rec_story(story, &assignments, &story.roster, lexicon);

    MetricReport {
        story_id: story.story_id.clone(),
        source_label: bundle.source_label.clone(),
        sentences: descriptives.sentences,
        words: descriptives.words,
        words_as_mentions: descriptives.words_as_mentions,
        num_chains: text.num_chains,
        num_character_chains: character_chains.len(),
        mean_chain_size: text.mean_chain_size,
        cci: text.crossing_index,
        char_tr: text.transition,
        char_tr_count: text.transition_count,
        char_dr: text.drop_rate,
        char_ad: text.addition_rate,
        char_ch: text.change_rate,
        char_re: text.reappearance,
        mcc: mcc_report.mcc,
        rec: rec_report.story_rec,
    }
}

/// Pearson correlation between two metrics over a corpus of reports.
/// Stories with an absent value in either metric are excluded pairwise;
/// returns the test plus the number of pairs kept and excluded.
pub fn pairwise_metric_correlation(
    corpus: &[MetricReport],
    metric_a: Metric,
    metric_b: Metric,
) -> Result<(TestResult, usize, usize), InputError> {
    pearson_pairwise(corpus.iter().map(|r| (r.get(metric_a), r.get(metric_b))))
}
