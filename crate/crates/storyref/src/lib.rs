//! Narrative consistency metrics over coreference-annotated visual stories.
//!
//! The pipeline: ingest annotated stories (CoNLL coreference output or the
//! canonical JSONL format), label which chains denote named characters,
//! compute per-story continuity metrics (character transitions, drops,
//! additions, complete changes, reappearance spread, chain crossings,
//! multimodal character continuity, referring expression change), and
//! compare corpora with Welch t-tests, Cohen's d, and Pearson correlations.
//!
//! Inputs are pre-annotated: no tokenization, sentence splitting, or
//! coreference resolution happens here.

pub mod error;
pub mod fixtures;
pub mod ingest;
pub mod labeling;
pub mod metrics;
pub mod model;
pub mod report;
pub mod stats;
pub mod synth;

pub use error::InputError;
pub use ingest::{ParseError, StoryBundle};
pub use model::{Chain, ChainId, CharacterName, Mention, Story};
pub use report::{compute_report, Metric, MetricReport};
