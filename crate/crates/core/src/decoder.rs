//! Most-likely tag sequence search.
//!
//! [`viterbi_decode`] runs a second-order dynamic program over states
//! `(previous tag, current tag)`, starting from `(BOS, BOS)` and closing
//! with the transition into `EOS`. [`brute_force_decode`] enumerates every
//! sequence and exists to check it.
//!
//! Ties are resolved by tagset declaration order. Viterbi picks the
//! earliest final state `(t[n-1], t[n])` and then the earliest
//! predecessor at each backpointer, so among equally scored sequences the
//! winner is the one whose key `(t[n-1], t[n], t[n-2], ..., t[1])` is
//! lexicographically smallest. The oracle enumerates in exactly that
//! order. Scores closer than [`TIE_TOLERANCE`] count as ties, so
//! mathematically equal paths that differ only by floating-point rounding
//! resolve the same way in both searches.

use thiserror::Error;

use crate::corpus::{Sentence, Symbol, TagId, TaggedSentence, Tagset};
use crate::model::TagModel;

/// Log-score difference below which two candidates are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-10;

/// Default sentence-length limit for [`brute_force_decode`].
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("cannot decode an empty sentence")]
    EmptySentence,
    #[error("sentence of {len} tokens exceeds the exhaustive-search cap of {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("tag #{0} is not in the model's tagset")]
    TagOutsideTagset(usize),
}

/// Log-probability source for decoding. [`TagModel`] is the real one;
/// tests wrap it to perturb or restrict scores.
pub trait Scorer {
    fn tagset(&self) -> &Tagset;

    /// `ln P(next | prev2, prev1)`; `prev*` are tags or `BOS`, `next` a tag
    /// or `EOS`.
    fn log_transition(&self, prev2: Symbol, prev1: Symbol, next: Symbol) -> f64;

    /// `ln P(word | tag)` for every tag in declaration order.
    fn log_emissions(&self, word: &str) -> Vec<f64>;
}

impl Scorer for TagModel {
    fn tagset(&self) -> &Tagset {
        TagModel::tagset(self)
    }

    fn log_transition(&self, prev2: Symbol, prev1: Symbol, next: Symbol) -> f64 {
        TagModel::log_transition(self, prev2, prev1, next)
    }

    fn log_emissions(&self, word: &str) -> Vec<f64> {
        self.log_emission_row(word).to_vec()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub tagged: TaggedSentence,
    /// Natural-log score of `tagged`; negative infinity when no sequence
    /// has non-zero probability and the emission fallback was used.
    pub log_score: f64,
    pub per_token_tags: Vec<TagId>,
}

impl DecodeResult {
    fn new<S: Scorer + ?Sized>(
        scorer: &S,
        sentence: &Sentence,
        tags: Vec<TagId>,
        log_score: f64,
    ) -> Self {
        debug_assert!(tags.iter().all(|t| scorer.tagset().has_id(*t)));
        let tagged = TaggedSentence::from_parts(sentence, &tags).expect("one tag per token");
        DecodeResult {
            tagged,
            log_score,
            per_token_tags: tags,
        }
    }

    pub fn labels<'a>(&self, tagset: &'a Tagset) -> Vec<&'a str> {
        self.per_token_tags
            .iter()
            .map(|t| tagset.label(*t))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Keep only this many best states per position. `None` is exact search.
    pub beam_width: Option<usize>,
}

/// `true` when `candidate` beats `best` by more than the tie tolerance.
fn beats(candidate: f64, best: f64) -> bool {
    if candidate == f64::NEG_INFINITY {
        return false;
    }
    if best == f64::NEG_INFINITY {
        return true;
    }
    candidate - best > TIE_TOLERANCE
}

/// Sum of log emission and log transition factors along the padded
/// sequence, accumulated left to right in the same order the decoder uses.
pub fn sequence_log_prob<S: Scorer + ?Sized>(
    scorer: &S,
    tagged: &TaggedSentence,
) -> Result<f64, DecodeError> {
    let tagset = scorer.tagset();
    if tagged.is_empty() {
        return Err(DecodeError::EmptySentence);
    }
    if let Some(bad) = tagged.tags().find(|t| !tagset.has_id(*t)) {
        return Err(DecodeError::TagOutsideTagset(bad.0));
    }
    let mut prev2 = Symbol::Bos;
    let mut prev1 = Symbol::Bos;
    let mut score = 0.0;
    for tok in tagged.tokens() {
        let cur = Symbol::Tag(tok.tag);
        score = score
            + scorer.log_transition(prev2, prev1, cur)
            + scorer.log_emissions(tok.token.as_str())[tok.tag.0];
        prev2 = prev1;
        prev1 = cur;
    }
    Ok(score + scorer.log_transition(prev2, prev1, Symbol::Eos))
}

/// Exact Viterbi search with default options.
pub fn viterbi_decode<S: Scorer + ?Sized>(
    scorer: &S,
    sentence: &Sentence,
) -> Result<DecodeResult, DecodeError> {
    viterbi_decode_with(scorer, sentence, DecodeOptions::default())
}

pub fn viterbi_decode_with<S: Scorer + ?Sized>(
    scorer: &S,
    sentence: &Sentence,
    options: DecodeOptions,
) -> Result<DecodeResult, DecodeError> {
    if sentence.is_empty() {
        return Err(DecodeError::EmptySentence);
    }
    let n_tags = scorer.tagset().len();
    let emissions = emission_matrix(scorer, sentence);
    // Context index: tags 0..n_tags, BOS = n_tags.
    let width = n_tags + 1;
    let bos = n_tags;
    let ctx = |i: usize| {
        if i == bos {
            Symbol::Bos
        } else {
            Symbol::Tag(TagId(i))
        }
    };
    let tag = |i: usize| Symbol::Tag(TagId(i));

    // delta[prev * width + cur]: best log score of a prefix ending in (prev, cur).
    let mut delta = vec![f64::NEG_INFINITY; width * width];
    for c in 0..n_tags {
        delta[bos * width + c] =
            scorer.log_transition(Symbol::Bos, Symbol::Bos, tag(c)) + emissions[0][c];
    }
    prune(&mut delta, options.beam_width);

    // backpointers[i][prev * width + cur] = tag (or BOS) two positions back.
    let mut backpointers: Vec<Vec<usize>> = Vec::with_capacity(sentence.len());
    backpointers.push(vec![bos; width * width]);

    for emit in emissions.iter().skip(1) {
        let mut next = vec![f64::NEG_INFINITY; width * width];
        let mut bp = vec![bos; width * width];
        for b in 0..n_tags {
            let live: Vec<usize> = (0..width)
                .filter(|&a| delta[a * width + b] != f64::NEG_INFINITY)
                .collect();
            if live.is_empty() {
                continue;
            }
            for (c, &e) in emit.iter().enumerate() {
                let mut best = f64::NEG_INFINITY;
                let mut arg = live[0];
                for &a in &live {
                    let cand = delta[a * width + b] + scorer.log_transition(ctx(a), tag(b), tag(c));
                    if beats(cand, best) {
                        best = cand;
                        arg = a;
                    }
                }
                next[b * width + c] = best + e;
                bp[b * width + c] = arg;
            }
        }
        prune(&mut next, options.beam_width);
        delta = next;
        backpointers.push(bp);
    }

    let mut best = f64::NEG_INFINITY;
    let mut best_state = None;
    let prev_range: Vec<usize> = if sentence.len() == 1 {
        vec![bos]
    } else {
        (0..n_tags).collect()
    };
    for &b in &prev_range {
        for c in 0..n_tags {
            let d = delta[b * width + c];
            if d == f64::NEG_INFINITY {
                continue;
            }
            let total = d + scorer.log_transition(ctx(b), tag(c), Symbol::Eos);
            if beats(total, best) {
                best = total;
                best_state = Some((b, c));
            }
        }
    }

    let Some((mut b, mut c)) = best_state else {
        let tags = emission_fallback(&emissions);
        return Ok(DecodeResult::new(scorer, sentence, tags, f64::NEG_INFINITY));
    };

    let n = sentence.len();
    let mut tags = vec![TagId(0); n];
    for i in (0..n).rev() {
        tags[i] = TagId(c);
        let a = backpointers[i][b * width + c];
        c = b;
        b = a;
    }
    let tagged = TaggedSentence::from_parts(sentence, &tags).expect("one tag per token");
    let log_score = sequence_log_prob(scorer, &tagged)?;
    Ok(DecodeResult {
        tagged,
        log_score,
        per_token_tags: tags,
    })
}

/// Exhaustive search over all `|tags|^n` sequences; fails for sentences
/// longer than `cap`.
pub fn brute_force_decode<S: Scorer + ?Sized>(
    scorer: &S,
    sentence: &Sentence,
    cap: usize,
) -> Result<DecodeResult, DecodeError> {
    let n = sentence.len();
    if n == 0 {
        return Err(DecodeError::EmptySentence);
    }
    if n > cap {
        return Err(DecodeError::CapExceeded { len: n, cap });
    }
    let n_tags = scorer.tagset().len();
    // Most significant position first: t[n-1], t[n], t[n-2], ..., t[1].
    let significance: Vec<usize> = if n == 1 {
        vec![0]
    } else {
        [n - 2, n - 1].into_iter().chain((0..n - 2).rev()).collect()
    };

    let mut digits = vec![0usize; n];
    let mut tags = vec![TagId(0); n];
    let mut best = f64::NEG_INFINITY;
    let mut best_tags: Option<Vec<TagId>> = None;
    loop {
        for (slot, &pos) in significance.iter().enumerate() {
            tags[pos] = TagId(digits[slot]);
        }
        let tagged = TaggedSentence::from_parts(sentence, &tags).expect("one tag per token");
        let score = sequence_log_prob(scorer, &tagged)?;
        if beats(score, best) {
            best = score;
            best_tags = Some(tags.clone());
        }
        // Odometer, least significant digit last.
        let mut slot = n;
        loop {
            if slot == 0 {
                let result = match best_tags {
                    Some(tags) => DecodeResult::new(scorer, sentence, tags, best),
                    None => {
                        let fallback = emission_fallback(&emission_matrix(scorer, sentence));
                        DecodeResult::new(scorer, sentence, fallback, f64::NEG_INFINITY)
                    }
                };
                return Ok(result);
            }
            slot -= 1;
            digits[slot] += 1;
            if digits[slot] < n_tags {
                break;
            }
            digits[slot] = 0;
        }
    }
}

fn emission_matrix<S: Scorer + ?Sized>(scorer: &S, sentence: &Sentence) -> Vec<Vec<f64>> {
    sentence
        .tokens()
        .iter()
        .map(|t| scorer.log_emissions(t.as_str()))
        .collect()
}

/// Per-token emission argmax, earliest tag on ties.
fn emission_fallback(emissions: &[Vec<f64>]) -> Vec<TagId> {
    emissions
        .iter()
        .map(|row| {
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0;
            for (t, &e) in row.iter().enumerate() {
                if beats(e, best) {
                    best = e;
                    arg = t;
                }
            }
            TagId(arg)
        })
        .collect()
}

/// Keeps the `width` best states, earlier states first on ties.
fn prune(delta: &mut [f64], width: Option<usize>) {
    let Some(width) = width else { return };
    let mut live: Vec<usize> = (0..delta.len())
        .filter(|&i| delta[i] != f64::NEG_INFINITY)
        .collect();
    if live.len() <= width {
        return;
    }
    live.sort_by(|&x, &y| delta[y].total_cmp(&delta[x]).then(x.cmp(&y)));
    for &i in &live[width..] {
        delta[i] = f64::NEG_INFINITY;
    }
}
