//! Parsing of external annotation formats and the canonical JSONL format.
//!
//! Two inputs are supported: CoNLL-2012-style coreference output (one token
//! per line, final column carrying parenthesized chain ids) and the
//! canonical JSONL format, one story record per line so corpora stream
//! without loading everything. Character rosters and image annotations
//! arrive via a JSONL sidecar keyed by story id, since the CoNLL format has
//! no slot for them.

mod conll;
mod jsonl;
mod sidecar;

pub use conll::{parse_conll_coref, parse_conll_coref_lenient, write_conll};
pub use jsonl::{parse_story_jsonl, read_jsonl, write_jsonl};
pub use sidecar::{attach_image_annotations, read_sidecar, SidecarRecord};

use thiserror::Error;

use crate::model::Story;

/// One story together with its corpus label (e.g. "human" or a model name)
/// and optional free-form provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct StoryBundle {
    pub story: Story,
    pub source_label: String,
    pub provenance: Option<serde_json::Map<String, serde_json::Value>>,
}

impl StoryBundle {
    pub fn new(story: Story, source_label: impl Into<String>) -> Self {
        StoryBundle { story, source_label: source_label.into(), provenance: None }
    }
}

/// Failure to parse an input stream. Line numbers are 1-based positions in
/// the stream being read.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected at least 4 columns (document id, token index, form, coreference)")]
    MissingColumns { line: usize },
    #[error("line {line}: token index is not an integer")]
    BadTokenIndex { line: usize },
    #[error("line {line}: malformed coreference tag {tag:?}")]
    BadCorefTag { line: usize, tag: String },
    #[error("line {line}: chain {chain} opened but never closed in its sentence")]
    UnbalancedOpen { line: usize, chain: u32 },
    #[error("line {line}: chain {chain} closed without a matching open")]
    UnbalancedClose { line: usize, chain: u32 },
    #[error("line {line}: chain {chain} opened while a mention of the same chain is still open; nested or crossing same-chain brackets are ambiguous")]
    AmbiguousSameChain { line: usize, chain: u32 },
    #[error("line {line}: document {doc:?} contains no tokens")]
    EmptyDocument { line: usize, doc: String },
    #[error("line {line}: token line outside of any document")]
    MissingBegin { line: usize },
    #[error("line {line}: document {doc:?} is never terminated by '#end document'")]
    MissingEnd { line: usize, doc: String },
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("story {story_id:?}: {message}")]
    Schema { story_id: String, message: String },
}
