//! Tag n-gram counts and the smoothed transition and emission estimators
//! built on them.
//!
//! A [`TagModel`] scores a tag sequence as the product over positions of
//! `P(word | tag) * P(tag | prev2, prev1)`, closed by `P(EOS | prev2, prev1)`.
//! The transition factor is the relative frequency
//! `f(prev2, prev1, tag) / f(prev2, prev1)`, optionally smoothed.

use std::borrow::Cow;
use std::collections::HashMap;
use std::convert::TryFrom;
use std::fmt;

use thiserror::Error;

use crate::corpus::{normalize, Symbol, TagId, Tagset, DEFAULT_OPEN_CLASS};

mod counts;
mod format;
mod interpolation;
mod smoothing;

pub use counts::{collect_counts, CountsTable};
pub use format::{deserialize_model, serialize_model, LoadError, FORMAT_MAGIC, FORMAT_VERSION};
pub use interpolation::estimate_interpolation_weights;
pub use smoothing::{Lambdas, OovMode, Smoothing, SmoothingConfig, LAMBDA_SUM_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("corpus contains no sentences")]
    EmptyCorpus,
    #[error("counts are all zero; interpolation weights cannot be estimated")]
    DegenerateCounts,
    #[error("invalid smoothing configuration: {0}")]
    InvalidSmoothing(String),
    #[error("unknown tag {0:?}")]
    UnknownTag(String),
    #[error("{symbol} cannot appear as {position}")]
    InvalidSymbol {
        symbol: String,
        position: &'static str,
    },
    #[error("model order must be 1, 2 or 3, got {0}")]
    InvalidOrder(u8),
    #[error("count tables are over different tagsets")]
    TagsetMismatch,
}

/// How many preceding tags condition a transition, plus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Unigram = 1,
    Bigram = 2,
    Trigram = 3,
}

impl Order {
    pub fn as_u8(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for Order {
    type Error = ModelError;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        match n {
            1 => Ok(Order::Unigram),
            2 => Ok(Order::Bigram),
            3 => Ok(Order::Trigram),
            other => Err(ModelError::InvalidOrder(other)),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Open-class tags of `tagset`: the default open labels it contains, or
/// every tag if it contains none of them.
pub fn default_open_class(tagset: &Tagset) -> Vec<TagId> {
    let open: Vec<TagId> = DEFAULT_OPEN_CLASS
        .iter()
        .filter_map(|l| tagset.id(l))
        .collect();
    if open.is_empty() {
        tagset.ids().collect()
    } else {
        let mut open = open;
        open.sort();
        open
    }
}

/// A finalized, immutable tagging model.
///
/// Probabilities are precomputed as natural logarithms (zero maps to
/// negative infinity); the public `*_prob` methods return linear values.
#[derive(Debug, Clone)]
pub struct TagModel {
    counts: CountsTable,
    smoothing: SmoothingConfig,
    order: Order,
    open_class: Vec<TagId>,
    log_trans: Vec<f64>,
    log_emit: HashMap<String, Vec<f64>>,
    oov: Vec<f64>,
    log_oov: Vec<f64>,
}

impl TagModel {
    /// Freezes `counts` into a model with the default open class. If the
    /// smoothing mode is interpolation without weights, the weights are
    /// estimated from the counts.
    pub fn finalize(
        counts: CountsTable,
        smoothing: SmoothingConfig,
        order: Order,
    ) -> Result<Self, ModelError> {
        let open_class = default_open_class(counts.tagset());
        Self::finalize_with_open_class(counts, smoothing, order, open_class)
    }

    pub fn finalize_with_open_class(
        counts: CountsTable,
        mut smoothing: SmoothingConfig,
        order: Order,
        mut open_class: Vec<TagId>,
    ) -> Result<Self, ModelError> {
        smoothing.validate()?;
        if let Smoothing::Interpolation(None) = smoothing.mode {
            smoothing.mode =
                Smoothing::Interpolation(Some(estimate_interpolation_weights(&counts)?));
        }
        open_class.sort();
        open_class.dedup();
        if let Some(bad) = open_class.iter().find(|t| !counts.tagset().has_id(**t)) {
            return Err(ModelError::UnknownTag(format!("#{}", bad.0)));
        }

        let mut model = TagModel {
            counts,
            smoothing,
            order,
            open_class,
            log_trans: Vec::new(),
            log_emit: HashMap::new(),
            oov: Vec::new(),
            log_oov: Vec::new(),
        };
        model.build_tables();
        Ok(model)
    }

    fn build_tables(&mut self) {
        let n = self.num_tags();
        let w = n + 1;
        let mut trans = vec![f64::NEG_INFINITY; w * w * w];
        for a in 0..w {
            for b in 0..w {
                for c in 0..w {
                    let p = self.transition_linear(
                        self.context_symbol(a),
                        self.context_symbol(b),
                        self.outcome_symbol(c),
                    );
                    trans[(a * w + b) * w + c] = p.ln();
                }
            }
        }
        self.log_trans = trans;

        let mut emit = HashMap::new();
        for word in self.counts.vocabulary() {
            let row = self
                .counts
                .tagset()
                .ids()
                .map(|t| self.known_emission(word, t).ln())
                .collect();
            emit.insert(word.to_string(), row);
        }
        self.log_emit = emit;
        self.oov = self
            .counts
            .tagset()
            .ids()
            .map(|t| self.oov_emission(t))
            .collect();
        self.log_oov = self.oov.iter().map(|p| p.ln()).collect();
    }

    pub fn counts(&self) -> &CountsTable {
        &self.counts
    }

    pub fn tagset(&self) -> &Tagset {
        self.counts.tagset()
    }

    pub fn smoothing(&self) -> &SmoothingConfig {
        &self.smoothing
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn open_class(&self) -> &[TagId] {
        &self.open_class
    }

    /// Interpolation weights in effect, if the model interpolates.
    pub fn lambdas(&self) -> Option<Lambdas> {
        match self.smoothing.mode {
            Smoothing::Interpolation(l) => l,
            _ => None,
        }
    }

    pub fn num_tags(&self) -> usize {
        self.counts.tagset().len()
    }

    pub fn in_vocabulary(&self, word: &str) -> bool {
        self.counts.contains_word(word)
    }

    /// `P(next | prev2, prev1)`. Contexts may be tags or `BOS`; the outcome
    /// may be a tag or `EOS`.
    pub fn transition_prob(
        &self,
        prev2: Symbol,
        prev1: Symbol,
        next: Symbol,
    ) -> Result<f64, ModelError> {
        self.check_context(prev2)?;
        self.check_context(prev1)?;
        self.check_outcome(next)?;
        Ok(self.transition_linear(prev2, prev1, next))
    }

    /// [`transition_prob`](Self::transition_prob) addressed by label; the
    /// boundary markers are spelled `<BOS>` and `<EOS>`.
    pub fn transition_prob_by_label(
        &self,
        prev2: &str,
        prev1: &str,
        next: &str,
    ) -> Result<f64, ModelError> {
        let resolve = |l: &str| {
            self.tagset()
                .symbol(l)
                .ok_or_else(|| ModelError::UnknownTag(l.to_string()))
        };
        self.transition_prob(resolve(prev2)?, resolve(prev1)?, resolve(next)?)
    }

    /// `P(word | tag)`. Unseen words fall back to the configured OOV mode.
    pub fn emission_prob(&self, word: &str, tag: TagId) -> Result<f64, ModelError> {
        if !self.tagset().has_id(tag) {
            return Err(ModelError::UnknownTag(format!("#{}", tag.0)));
        }
        let word = normalized(word);
        if self.counts.contains_word(&word) {
            Ok(self.known_emission(&word, tag))
        } else {
            Ok(self.oov[tag.0])
        }
    }

    pub fn emission_prob_by_label(&self, word: &str, tag: &str) -> Result<f64, ModelError> {
        let id = self
            .tagset()
            .id(tag)
            .ok_or_else(|| ModelError::UnknownTag(tag.to_string()))?;
        self.emission_prob(word, id)
    }

    /// Log transition from the precomputed table. Arguments must satisfy
    /// the same constraints as [`transition_prob`](Self::transition_prob).
    pub fn log_transition(&self, prev2: Symbol, prev1: Symbol, next: Symbol) -> f64 {
        let w = self.num_tags() + 1;
        let a = self.context_index(prev2);
        let b = self.context_index(prev1);
        let c = self.outcome_index(next);
        self.log_trans[(a * w + b) * w + c]
    }

    /// Log emission row for `word` (one entry per tag). `word` is expected
    /// to be in canonical form already, as [`Token`](crate::corpus::Token)s are.
    pub fn log_emission_row(&self, word: &str) -> &[f64] {
        self.log_emit.get(word).unwrap_or(&self.log_oov)
    }

    fn check_context(&self, s: Symbol) -> Result<(), ModelError> {
        match s {
            Symbol::Eos => Err(ModelError::InvalidSymbol {
                symbol: "<EOS>".into(),
                position: "a transition context",
            }),
            Symbol::Tag(t) if !self.tagset().has_id(t) => {
                Err(ModelError::UnknownTag(format!("#{}", t.0)))
            }
            _ => Ok(()),
        }
    }

    fn check_outcome(&self, s: Symbol) -> Result<(), ModelError> {
        match s {
            Symbol::Bos => Err(ModelError::InvalidSymbol {
                symbol: "<BOS>".into(),
                position: "a transition outcome",
            }),
            Symbol::Tag(t) if !self.tagset().has_id(t) => {
                Err(ModelError::UnknownTag(format!("#{}", t.0)))
            }
            _ => Ok(()),
        }
    }

    fn context_index(&self, s: Symbol) -> usize {
        match s {
            Symbol::Tag(t) => t.0,
            _ => self.num_tags(),
        }
    }

    fn outcome_index(&self, s: Symbol) -> usize {
        self.context_index(s)
    }

    fn context_symbol(&self, i: usize) -> Symbol {
        if i == self.num_tags() {
            Symbol::Bos
        } else {
            Symbol::Tag(TagId(i))
        }
    }

    fn outcome_symbol(&self, i: usize) -> Symbol {
        if i == self.num_tags() {
            Symbol::Eos
        } else {
            Symbol::Tag(TagId(i))
        }
    }

    fn transition_linear(&self, prev2: Symbol, prev1: Symbol, next: Symbol) -> f64 {
        let c = &self.counts;
        // Outcomes are the tags plus EOS.
        let outcomes = (self.num_tags() + 1) as f64;
        let mle3 = || ratio(c.tri(prev2, prev1, next), c.bi(prev2, prev1));
        let mle2 = || ratio(c.bi(prev1, next), c.context_count(prev1));
        let mle1 = || ratio(c.unigram(next), c.outcome_total());
        match (self.order, self.smoothing.mode) {
            (Order::Trigram, Smoothing::None) => mle3(),
            (Order::Bigram, Smoothing::None) => mle2(),
            (Order::Unigram, Smoothing::None) => mle1(),
            (Order::Trigram, Smoothing::AddK(k)) => {
                (c.tri(prev2, prev1, next) as f64 + k) / (c.bi(prev2, prev1) as f64 + k * outcomes)
            }
            (Order::Bigram, Smoothing::AddK(k)) => {
                (c.bi(prev1, next) as f64 + k) / (c.context_count(prev1) as f64 + k * outcomes)
            }
            (Order::Unigram, Smoothing::AddK(k)) => {
                (c.unigram(next) as f64 + k) / (c.outcome_total() as f64 + k * outcomes)
            }
            (order, Smoothing::Interpolation(lambdas)) => {
                let l = lambdas.expect("weights are resolved at finalize");
                match order {
                    Order::Trigram => l.trigram * mle3() + l.bigram * mle2() + l.unigram * mle1(),
                    Order::Bigram => (l.trigram + l.bigram) * mle2() + l.unigram * mle1(),
                    Order::Unigram => mle1(),
                }
            }
        }
    }

    fn known_emission(&self, word: &str, tag: TagId) -> f64 {
        ratio(self.counts.emit(word, tag), self.counts.uni(tag))
    }

    fn oov_emission(&self, tag: TagId) -> f64 {
        if self.smoothing.oov == OovMode::SingletonTagDistribution {
            if let Some(p) = self.singleton_tag_prob(tag) {
                return p;
            }
        }
        if self.open_class.binary_search(&tag).is_ok() {
            1.0 / self.open_class.len() as f64
        } else {
            0.0
        }
    }

    /// `P(tag | word occurred once)`, or `None` when no word is a singleton.
    fn singleton_tag_prob(&self, tag: TagId) -> Option<f64> {
        let mut singletons = 0u64;
        let mut with_tag = 0u64;
        for word in self.counts.vocabulary() {
            if self.counts.word_count(word) == 1 {
                singletons += 1;
                if self.counts.emit(word, tag) == 1 {
                    with_tag += 1;
                }
            }
        }
        (singletons > 0).then(|| with_tag as f64 / singletons as f64)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn normalized(word: &str) -> Cow<'_, str> {
    if unicode_normalization::is_nfc(word) {
        Cow::Borrowed(word)
    } else {
        Cow::Owned(normalize(word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::toy_corpus;

    fn toy_model(smoothing: SmoothingConfig, order: Order) -> TagModel {
        TagModel::finalize(collect_counts(&toy_corpus()).unwrap(), smoothing, order).unwrap()
    }

    #[test]
    fn toy_transitions_mle() {
        let m = toy_model(SmoothingConfig::none(), Order::Trigram);
        let p = |a, b, c| m.transition_prob_by_label(a, b, c).unwrap();
        assert!((p("<BOS>", "<BOS>", "NN") - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(p("<BOS>", "NN", "VM"), 1.0);
        assert_eq!(p("PSP", "QC", "NN"), 0.0);
        assert_eq!(p("PSP", "QC", "<EOS>"), 0.0);
    }

    #[test]
    fn toy_emissions() {
        let m = toy_model(SmoothingConfig::none(), Order::Trigram);
        let e = |w, t| m.emission_prob_by_label(w, t).unwrap();
        assert!((e("w2", "VM") - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(e("w1", "NN"), 1.0);
        assert!((e("w9", "NN") - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(e("w9", "PSP"), 0.0);
        assert_eq!(e("w1", "PSP"), 0.0);
    }

    #[test]
    fn singleton_oov_mode() {
        // Singletons in the toy corpus: w3 (VM) only.
        let m = toy_model(
            SmoothingConfig::new(Smoothing::None, OovMode::SingletonTagDistribution),
            Order::Trigram,
        );
        assert_eq!(m.emission_prob_by_label("w9", "VM").unwrap(), 1.0);
        assert_eq!(m.emission_prob_by_label("w9", "NN").unwrap(), 0.0);
    }

    #[test]
    fn unigram_order_ignores_context() {
        let m = toy_model(SmoothingConfig::none(), Order::Unigram);
        let p = |a, b, c| m.transition_prob_by_label(a, b, c).unwrap();
        // uni(VM) = 3 of 9 predicted positions (6 tokens + 3 EOS).
        assert!((p("<BOS>", "<BOS>", "VM") - 3.0 / 9.0).abs() < 1e-12);
        assert_eq!(p("NN", "JJ", "VM"), p("<BOS>", "<BOS>", "VM"));
        assert!((p("QC", "QC", "<EOS>") - 3.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn bigram_order() {
        let m = toy_model(SmoothingConfig::none(), Order::Bigram);
        let p = |a, b, c| m.transition_prob_by_label(a, b, c).unwrap();
        assert!((p("QC", "<BOS>", "NN") - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(p("NN", "VM", "<EOS>"), 1.0);
    }

    #[test]
    fn add_k_formula() {
        let m = toy_model(SmoothingConfig::add_k(0.5), Order::Trigram);
        let v = 24.0;
        let p = m.transition_prob_by_label("<BOS>", "<BOS>", "NN").unwrap();
        assert!((p - (2.0 + 0.5) / (3.0 + 0.5 * v)).abs() < 1e-12);
        let unseen = m.transition_prob_by_label("PSP", "PSP", "PSP").unwrap();
        assert!((unseen - 1.0 / v).abs() < 1e-12);
    }

    #[test]
    fn interpolation_formula() {
        let m = toy_model(SmoothingConfig::interpolation(), Order::Trigram);
        let l = m.lambdas().unwrap();
        let p = m.transition_prob_by_label("<BOS>", "JJ", "VM").unwrap();
        // mle3 = 1/1, mle2 = bi(JJ,VM)/uni(JJ) = 1, mle1 = 3/9
        let expected = l.trigram + l.bigram + l.unigram / 3.0;
        assert!((p - expected).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let m = toy_model(SmoothingConfig::none(), Order::Trigram);
        assert_eq!(
            m.transition_prob_by_label("<BOS>", "<BOS>", "FOO"),
            Err(ModelError::UnknownTag("FOO".into()))
        );
        assert!(matches!(
            m.transition_prob(Symbol::Eos, Symbol::Bos, Symbol::Eos),
            Err(ModelError::InvalidSymbol { .. })
        ));
        assert!(matches!(
            m.transition_prob(Symbol::Bos, Symbol::Bos, Symbol::Bos),
            Err(ModelError::InvalidSymbol { .. })
        ));
        assert!(m.emission_prob("w1", TagId(99)).is_err());
        assert!(m.emission_prob_by_label("w1", "FOO").is_err());
    }

    #[test]
    fn log_tables_match_linear() {
        let m = toy_model(SmoothingConfig::interpolation(), Order::Trigram);
        let ts = m.tagset().clone();
        let nn = Symbol::Tag(ts.id("NN").unwrap());
        let vm = Symbol::Tag(ts.id("VM").unwrap());
        assert_eq!(
            m.log_transition(Symbol::Bos, nn, vm),
            m.transition_prob(Symbol::Bos, nn, vm).unwrap().ln()
        );
        let row = m.log_emission_row("w1");
        assert_eq!(row[ts.id("NN").unwrap().0], 1.0f64.ln());
        assert_eq!(row[ts.id("PSP").unwrap().0], f64::NEG_INFINITY);
    }

    #[test]
    fn order_from_u8() {
        assert_eq!(Order::try_from(3).unwrap(), Order::Trigram);
        assert_eq!(Order::try_from(4), Err(ModelError::InvalidOrder(4)));
    }

    #[test]
    fn open_class_for_custom_tagsets() {
        let ts = Tagset::new(["A", "B"]).unwrap();
        assert_eq!(default_open_class(&ts), vec![TagId(0), TagId(1)]);
        let ts = Tagset::new(["PSP", "NN"]).unwrap();
        assert_eq!(default_open_class(&ts), vec![TagId(1)]);
    }
}
