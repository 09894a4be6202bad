//! Tagsets, tokens, tagged corpora and the tab-separated corpus format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;
use unicode_normalization::{is_nfc, UnicodeNormalization};

mod io;
mod raw;
mod split;
mod tagset;

pub use io::{parse_tagged_corpus, parse_tokenized_text, write_tagged_corpus};
pub use raw::{parse_raw_text, SENTENCE_TERMINATORS};
pub use split::split_corpus;
pub use tagset::{Symbol, TagId, Tagset, BOS_LABEL, DEFAULT_OPEN_CLASS, DEFAULT_TAGS, EOS_LABEL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: tag {tag:?} is not in the tagset")]
    TagsetViolation { line: usize, tag: String },
    #[error("corpus contains no sentences")]
    EmptyCorpus,
    #[error("invalid tagset: {0}")]
    InvalidTagset(String),
    #[error("invalid token {0:?}: tokens must be non-empty and contain no whitespace")]
    InvalidToken(String),
    #[error("sentences must contain at least one token")]
    EmptySentence,
}

/// A word form in canonical composition (NFC).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    pub fn new(surface: &str) -> Result<Self, CorpusError> {
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(CorpusError::InvalidToken(surface.to_string()));
        }
        Ok(Token(normalize(surface)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Canonical composition; the identity on text that is already NFC.
pub fn normalize(text: &str) -> String {
    if is_nfc(text) {
        text.to_string()
    } else {
        text.nfc().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedToken {
    pub token: Token,
    pub tag: TagId,
}

/// Untagged sentence: at least one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence(Vec<Token>);

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Result<Self, CorpusError> {
        if tokens.is_empty() {
            return Err(CorpusError::EmptySentence);
        }
        Ok(Sentence(tokens))
    }

    /// Convenience constructor from whitespace-separated surfaces.
    pub fn from_words(text: &str) -> Result<Self, CorpusError> {
        Sentence::new(
            text.split_whitespace()
                .map(Token::new)
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence(Vec<TaggedToken>);

impl TaggedSentence {
    pub fn new(tokens: Vec<TaggedToken>) -> Result<Self, CorpusError> {
        if tokens.is_empty() {
            return Err(CorpusError::EmptySentence);
        }
        Ok(TaggedSentence(tokens))
    }

    /// Pairs a sentence with one tag per token.
    pub fn from_parts(sentence: &Sentence, tags: &[TagId]) -> Result<Self, CorpusError> {
        if sentence.len() != tags.len() {
            return Err(CorpusError::Parse {
                line: 0,
                message: format!(
                    "{} tags supplied for a sentence of {} tokens",
                    tags.len(),
                    sentence.len()
                ),
            });
        }
        TaggedSentence::new(
            sentence
                .tokens()
                .iter()
                .zip(tags)
                .map(|(token, &tag)| TaggedToken {
                    token: token.clone(),
                    tag,
                })
                .collect(),
        )
    }

    pub fn tokens(&self) -> &[TaggedToken] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tags(&self) -> impl Iterator<Item = TagId> + '_ {
        self.0.iter().map(|t| t.tag)
    }

    /// Drops the tags.
    pub fn sentence(&self) -> Sentence {
        Sentence(self.0.iter().map(|t| t.token.clone()).collect())
    }
}

/// Tagged sentences together with the tagset every tag belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedCorpus {
    tagset: Arc<Tagset>,
    sentences: Vec<TaggedSentence>,
}

impl TaggedCorpus {
    /// Checks every tag against the tagset.
    pub fn new(tagset: Arc<Tagset>, sentences: Vec<TaggedSentence>) -> Result<Self, CorpusError> {
        for sentence in &sentences {
            for tok in sentence.tokens() {
                if !tagset.has_id(tok.tag) {
                    return Err(CorpusError::TagsetViolation {
                        line: 0,
                        tag: format!("#{}", tok.tag.0),
                    });
                }
            }
        }
        Ok(TaggedCorpus { tagset, sentences })
    }

    /// Builds a corpus from `(surface, label)` pairs; mostly for fixtures.
    pub fn from_labels<'a, S>(tagset: Arc<Tagset>, sentences: S) -> Result<Self, CorpusError>
    where
        S: IntoIterator<Item = &'a [(&'a str, &'a str)]>,
    {
        let mut out = Vec::new();
        for pairs in sentences {
            let mut tokens = Vec::with_capacity(pairs.len());
            for &(surface, label) in pairs {
                let tag = tagset
                    .id(label)
                    .ok_or_else(|| CorpusError::TagsetViolation {
                        line: 0,
                        tag: label.to_string(),
                    })?;
                tokens.push(TaggedToken {
                    token: Token::new(surface)?,
                    tag,
                });
            }
            out.push(TaggedSentence::new(tokens)?);
        }
        Ok(TaggedCorpus {
            tagset,
            sentences: out,
        })
    }

    pub fn tagset(&self) -> &Arc<Tagset> {
        &self.tagset
    }

    pub fn sentences(&self) -> &[TaggedSentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(TaggedSentence::len).sum()
    }

    pub fn into_sentences(self) -> Vec<TaggedSentence> {
        self.sentences
    }
}

/// Summary statistics of a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub sentences: usize,
    pub tokens: usize,
    pub vocabulary: BTreeSet<String>,
    pub tag_frequencies: BTreeMap<String, usize>,
    /// Indices of sentences with no tokens.
    pub empty_sentences: Vec<usize>,
}

impl ValidationReport {
    pub fn vocabulary_size(&self) -> usize {
        self.vocabulary.len()
    }
}

pub fn validate_corpus(corpus: &TaggedCorpus) -> ValidationReport {
    let mut report = ValidationReport {
        sentences: corpus.len(),
        ..Default::default()
    };
    for (i, sentence) in corpus.sentences().iter().enumerate() {
        if sentence.is_empty() {
            report.empty_sentences.push(i);
        }
        for tok in sentence.tokens() {
            report.tokens += 1;
            report.vocabulary.insert(tok.token.as_str().to_string());
            *report
                .tag_frequencies
                .entry(corpus.tagset().label(tok.tag).to_string())
                .or_default() += 1;
        }
    }
    report
}

/// The three-sentence toy corpus used throughout the tests:
/// `w1/NN w2/VM`, `w1/NN w3/VM`, `w1/JJ w2/VM`.
pub fn toy_corpus() -> TaggedCorpus {
    TaggedCorpus::from_labels(
        Arc::new(Tagset::default()),
        [
            &[("w1", "NN"), ("w2", "VM")][..],
            &[("w1", "NN"), ("w3", "VM")][..],
            &[("w1", "JJ"), ("w2", "VM")][..],
        ],
    )
    .expect("toy corpus is valid")
}
