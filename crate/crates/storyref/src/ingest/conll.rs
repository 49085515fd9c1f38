//! CoNLL-2012-style coreference format.
//!
//! Accepted layout: `#begin document <id>` and `#end document` delimit
//! stories; a blank line ends a sentence; token lines carry whitespace
//! separated columns with the document id first, the 0-based token index
//! second, the word form third, and the coreference tag last (columns in
//! between are ignored). Coreference tags are `-` for none, or `|`-separated
//! items of the form `(3`, `3)`, and `(3)`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::ingest::{ParseError, StoryBundle};
use crate::model::{Chain, ChainId, Mention, Story};

/// Parse a CoNLL coreference stream into one bundle per document, stopping
/// at the first malformed document.
pub fn parse_conll_coref(
    reader: impl BufRead,
    source_label: &str,
) -> Result<Vec<StoryBundle>, ParseError> {
    let (bundles, mut errors) = parse_conll_coref_lenient(reader, source_label)?;
    match errors.is_empty() {
        true => Ok(bundles),
        false => Err(errors.remove(0)),
    }
}

/// Parse a CoNLL coreference stream, skipping malformed documents.
///
/// Documents are independent, so one bad document does not poison the rest
/// of the file: the result carries every document that parsed plus one
/// diagnostic per document that did not. The outer error is reserved for
/// stream-level i/o failures.
pub fn parse_conll_coref_lenient(
    reader: impl BufRead,
    source_label: &str,
) -> Result<(Vec<StoryBundle>, Vec<ParseError>), ParseError> {
    let mut bundles = Vec::new();
    let mut errors = Vec::new();
    let mut current: Option<DocumentParser> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();

        if let Some(header) = trimmed.strip_prefix("#begin document") {
            if let Some(doc) = current.take() {
                if !doc.failed {
                    // Unterminated previous document.
                    errors.push(ParseError::MissingEnd { line: line_no, doc: doc.story_id });
                }
            }
            current = Some(DocumentParser::new(document_id(header, bundles.len() + errors.len()), line_no));
            continue;
        }
        if trimmed == "#end document" {
            match current.take() {
                // A document that already produced a diagnostic is dropped
                // silently here.
                Some(doc) if doc.failed => {}
                Some(doc) => match doc.finish(line_no, source_label) {
                    Ok(bundle) => bundles.push(bundle),
                    Err(e) => errors.push(e),
                },
                None => errors.push(ParseError::MissingBegin { line: line_no }),
            }
            continue;
        }
        if trimmed.starts_with('#') {
            continue; // other comment lines
        }

        match &mut current {
            Some(doc) => {
                if doc.failed {
                    continue;
                }
                if trimmed.is_empty() {
                    if let Err(e) = doc.end_sentence(line_no) {
                        doc.fail();
                        errors.push(e);
                    }
                } else if let Err(e) = doc.push_token_line(trimmed, line_no) {
                    doc.fail();
                    errors.push(e);
                }
            }
            None if trimmed.is_empty() => {}
            None => errors.push(ParseError::MissingBegin { line: line_no }),
        }
    }

    if let Some(doc) = current.take() {
        if !doc.failed {
            errors.push(ParseError::MissingEnd { line: doc.begin_line, doc: doc.story_id });
        }
    }
    Ok((bundles, errors))
}

/// Extract the story id from the text after `#begin document`, handling the
/// conventional `(<id>); part NNN` form.
fn document_id(header: &str, ordinal: usize) -> String {
    let header = header.trim();
    let (id_part, part) = match header.split_once("; part") {
        Some((id, part)) => (id.trim(), Some(part.trim())),
        None => (header, None),
    };
    let id = id_part
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(id_part)
        .trim();
    let base = if id.is_empty() { format!("doc{ordinal}") } else { id.to_string() };
    match part {
        Some(p) if !p.is_empty() && !p.trim_start_matches('0').is_empty() => format!("{base}#{p}"),
        _ => base,
    }
}

struct DocumentParser {
    story_id: String,
    begin_line: usize,
    sentences: Vec<Vec<String>>,
    sentence: Vec<String>,
    /// Start of the currently open mention per chain id.
    open: BTreeMap<u32, (usize, usize)>,
    chains: BTreeMap<u32, Vec<Mention>>,
    failed: bool,
}

impl DocumentParser {
    fn new(story_id: String, begin_line: usize) -> Self {
        DocumentParser {
            story_id,
            begin_line,
            sentences: Vec::new(),
            sentence: Vec::new(),
            open: BTreeMap::new(),
            chains: BTreeMap::new(),
            failed: false,
        }
    }

    fn fail(&mut self) {
        self.failed = true;
    }

    fn push_token_line(&mut self, line: &str, line_no: usize) -> Result<(), ParseError> {
        let columns: Vec<&str> = line.split_whitespace().collect();
        if columns.len() < 4 {
            return Err(ParseError::MissingColumns { line: line_no });
        }
        if columns[1].parse::<usize>().is_err() {
            return Err(ParseError::BadTokenIndex { line: line_no });
        }
        let form = columns[2];
        let coref = columns[columns.len() - 1];

        let sentence_idx = self.sentences.len();
        let token_idx = self.sentence.len();
        self.sentence.push(form.to_string());

        if coref == "-" || coref == "_" {
            return Ok(());
        }
        for item in coref.split('|') {
            self.apply_tag(item, sentence_idx, token_idx, line_no)?;
        }
        Ok(())
    }

    fn apply_tag(
        &mut self,
        tag: &str,
        sentence: usize,
        token: usize,
        line_no: usize,
    ) -> Result<(), ParseError> {
        let parse_id = |digits: &str| -> Result<u32, ParseError> {
            digits
                .parse::<u32>()
                .map_err(|_| ParseError::BadCorefTag { line: line_no, tag: tag.to_string() })
        };
        if let Some(rest) = tag.strip_prefix('(') {
            if let Some(digits) = rest.strip_suffix(')') {
                // Complete single-token mention.
                let id = parse_id(digits)?;
                self.chains
                    .entry(id)
                    .or_default()
                    .push(Mention::new(sentence, token, token));
            } else {
                let id = parse_id(rest)?;
                // A second open of the same chain cannot be told apart from
                // a crossing mention in this format; reject it.
                if self.open.contains_key(&id) {
                    return Err(ParseError::AmbiguousSameChain { line: line_no, chain: id });
                }
                self.open.insert(id, (sentence, token));
            }
        } else if let Some(digits) = tag.strip_suffix(')') {
            let id = parse_id(digits)?;
            let Some((open_sentence, start)) = self.open.remove(&id) else {
                return Err(ParseError::UnbalancedClose { line: line_no, chain: id });
            };
            debug_assert_eq!(open_sentence, sentence);
            self.chains
                .entry(id)
                .or_default()
                .push(Mention::new(sentence, start, token));
        } else {
            return Err(ParseError::BadCorefTag { line: line_no, tag: tag.to_string() });
        }
        Ok(())
    }

    /// Mentions never span sentences, so any still-open bracket at a
    /// sentence boundary is unbalanced.
    fn end_sentence(&mut self, line_no: usize) -> Result<(), ParseError> {
        if let Some((&chain, _)) = self.open.iter().next() {
            return Err(ParseError::UnbalancedOpen { line: line_no, chain });
        }
        if !self.sentence.is_empty() {
            self.sentences.push(std::mem::take(&mut self.sentence));
        }
        Ok(())
    }

    fn finish(mut self, line_no: usize, source_label: &str) -> Result<StoryBundle, ParseError> {
        self.end_sentence(line_no)?;
        if self.sentences.is_empty() {
            return Err(ParseError::EmptyDocument { line: self.begin_line, doc: self.story_id });
        }
        let chains = self
            .chains
            .into_iter()
            .map(|(id, mut mentions)| {
                mentions.sort();
                Chain::new(ChainId(id), mentions)
            })
            .collect();
        let story = Story {
            story_id: self.story_id,
            sentences: self.sentences,
            chains,
            roster: Vec::new(),
            images: None,
        };
        Ok(StoryBundle::new(story, source_label))
    }
}

/// Serialize bundles back to the CoNLL layout (document id, token index,
/// form, coreference column). Inverse of [`parse_conll_coref`] on the
/// bracket structure.
pub fn write_conll(bundles: &[StoryBundle], mut sink: impl Write) -> std::io::Result<()> {
    for bundle in bundles {
        let story = &bundle.story;
        writeln!(sink, "#begin document ({})", story.story_id)?;
        for (s, sentence) in story.sentences.iter().enumerate() {
            for (t, form) in sentence.iter().enumerate() {
                let tag = coref_tag(story, s, t);
                writeln!(sink, "{}\t{}\t{}\t{}", story.story_id, t, form, tag)?;
            }
            writeln!(sink)?;
        }
        writeln!(sink, "#end document")?;
    }
    Ok(())
}

fn coref_tag(story: &Story, sentence: usize, token: usize) -> String {
    // Wider mentions open first and close last, so nesting stays balanced.
    let mut opens: Vec<(usize, u32)> = Vec::new(); // (end, id)
    let mut singles: Vec<u32> = Vec::new();
    let mut closes: Vec<(usize, u32)> = Vec::new(); // (start, id)
    for chain in &story.chains {
        for m in &chain.mentions {
            if m.sentence != sentence {
                continue;
            }
            if m.start == token && m.end == token {
                singles.push(chain.id.0);
            } else if m.start == token {
                opens.push((m.end, chain.id.0));
            } else if m.end == token {
                closes.push((m.start, chain.id.0));
            }
        }
    }
    opens.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    singles.sort();
    closes.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut items: Vec<String> = Vec::new();
    items.extend(opens.iter().map(|(_, id)| format!("({id}")));
    items.extend(singles.iter().map(|id| format!("({id})")));
    items.extend(closes.iter().map(|(_, id)| format!("{id})")));
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join("|")
    }
}
