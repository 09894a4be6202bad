use std::sync::Arc;

use super::{CorpusError, Sentence, TaggedCorpus, TaggedSentence, TaggedToken, Tagset, Token};

/// Parses the one-token-per-line format: `surface<TAB>tag`, sentences
/// separated by a blank line. Lines starting with `#` that contain no tab
/// are comments, but only before the first sentence.
pub fn parse_tagged_corpus(text: &str, tagset: Arc<Tagset>) -> Result<TaggedCorpus, CorpusError> {
    let mut sentences = Vec::new();
    let mut current: Vec<TaggedToken> = Vec::new();
    let mut in_preamble = true;

    for (idx, raw_line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);

        if line.is_empty() {
            if !current.is_empty() {
                sentences.push(TaggedSentence(std::mem::take(&mut current)));
            }
            continue;
        }
        if in_preamble && line.starts_with('#') && !line.contains('\t') {
            continue;
        }
        in_preamble = false;

        let (surface, label) = line.split_once('\t').ok_or_else(|| CorpusError::Parse {
            line: line_no,
            message: "expected `surface<TAB>tag`".into(),
        })?;
        if label.contains('\t') {
            return Err(CorpusError::Parse {
                line: line_no,
                message: "more than two tab-separated fields".into(),
            });
        }
        let token = Token::new(surface).map_err(|_| CorpusError::Parse {
            line: line_no,
            message: format!("invalid surface {surface:?}"),
        })?;
        let tag = tagset
            .id(label)
            .ok_or_else(|| CorpusError::TagsetViolation {
                line: line_no,
                tag: label.to_string(),
            })?;
        current.push(TaggedToken { token, tag });
    }
    if !current.is_empty() {
        sentences.push(TaggedSentence(current));
    }
    if sentences.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(TaggedCorpus { tagset, sentences })
}

/// Writes the corpus in the format read by [`parse_tagged_corpus`].
/// Output is deterministic: LF endings, one blank line between sentences,
/// a single trailing newline.
pub fn write_tagged_corpus(corpus: &TaggedCorpus) -> String {
    let mut out = String::new();
    for (i, sentence) in corpus.sentences().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for tok in sentence.tokens() {
            out.push_str(tok.token.as_str());
            out.push('\t');
            out.push_str(corpus.tagset().label(tok.tag));
            out.push('\n');
        }
    }
    out
}

/// Parses pre-tokenized input: one token per line, blank lines between
/// sentences. Anything after the first tab is ignored, so tagged files can
/// be fed back in. Leading `#` comment lines are skipped as in the tagged
/// format.
pub fn parse_tokenized_text(text: &str) -> Result<Vec<Sentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    let mut in_preamble = true;
    for (idx, raw_line) in text.split('\n').enumerate() {
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        if line.is_empty() {
            if !current.is_empty() {
                sentences.push(Sentence(std::mem::take(&mut current)));
            }
            continue;
        }
        if in_preamble && line.starts_with('#') && !line.contains('\t') {
            continue;
        }
        in_preamble = false;
        let surface = line.split('\t').next().unwrap_or_default();
        current.push(Token::new(surface).map_err(|_| CorpusError::Parse {
            line: idx + 1,
            message: format!("invalid token {surface:?}"),
        })?);
    }
    if !current.is_empty() {
        sentences.push(Sentence(current));
    }
    Ok(sentences)
}
