use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::ModelError;
use crate::corpus::{Symbol, TagId, TaggedCorpus, TaggedSentence, Tagset};

/// Below this many sentences counting stays on the calling thread.
const PARALLEL_THRESHOLD: usize = 2048;

/// Raw frequencies collected from boundary-padded sentences.
///
/// Each sentence `t1..tn` is counted as `BOS BOS t1..tn EOS`, so the
/// trigram contexts are `(BOS,BOS)`, `(BOS,t1)`, ..., `(t(n-1),tn)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsTable {
    tagset: Arc<Tagset>,
    uni: BTreeMap<TagId, u64>,
    bi: BTreeMap<(Symbol, Symbol), u64>,
    tri: BTreeMap<(Symbol, Symbol, Symbol), u64>,
    emit: BTreeMap<String, BTreeMap<TagId, u64>>,
    sentences: u64,
    tokens_total: u64,
}

impl CountsTable {
    /// An empty table over `tagset`.
    pub fn empty(tagset: Arc<Tagset>) -> Self {
        CountsTable {
            tagset,
            uni: BTreeMap::new(),
            bi: BTreeMap::new(),
            tri: BTreeMap::new(),
            emit: BTreeMap::new(),
            sentences: 0,
            tokens_total: 0,
        }
    }

    pub fn add_sentence(&mut self, sentence: &TaggedSentence) {
        let mut prev2 = Symbol::Bos;
        let mut prev1 = Symbol::Bos;
        *self.bi.entry((Symbol::Bos, Symbol::Bos)).or_default() += 1;
        for tok in sentence.tokens() {
            let cur = Symbol::Tag(tok.tag);
            *self.uni.entry(tok.tag).or_default() += 1;
            *self.bi.entry((prev1, cur)).or_default() += 1;
            *self.tri.entry((prev2, prev1, cur)).or_default() += 1;
            *self
                .emit
                .entry(tok.token.as_str().to_string())
                .or_default()
                .entry(tok.tag)
                .or_default() += 1;
            prev2 = prev1;
            prev1 = cur;
        }
        *self.bi.entry((prev1, Symbol::Eos)).or_default() += 1;
        *self.tri.entry((prev2, prev1, Symbol::Eos)).or_default() += 1;
        self.sentences += 1;
        self.tokens_total += sentence.len() as u64;
    }

    /// Pointwise sum of two tables over the same tagset.
    pub fn merge(&mut self, other: &CountsTable) -> Result<(), ModelError> {
        if self.tagset != other.tagset {
            return Err(ModelError::TagsetMismatch);
        }
        for (k, v) in &other.uni {
            *self.uni.entry(*k).or_default() += v;
        }
        for (k, v) in &other.bi {
            *self.bi.entry(*k).or_default() += v;
        }
        for (k, v) in &other.tri {
            *self.tri.entry(*k).or_default() += v;
        }
        for (word, tags) in &other.emit {
            let row = self.emit.entry(word.clone()).or_default();
            for (tag, v) in tags {
                *row.entry(*tag).or_default() += v;
            }
        }
        self.sentences += other.sentences;
        self.tokens_total += other.tokens_total;
        Ok(())
    }

    pub fn tagset(&self) -> &Arc<Tagset> {
        &self.tagset
    }

    pub fn uni(&self, tag: TagId) -> u64 {
        self.uni.get(&tag).copied().unwrap_or(0)
    }

    /// Unigram count of an outcome symbol; `EOS` occurs once per sentence.
    pub fn unigram(&self, symbol: Symbol) -> u64 {
        match symbol {
            Symbol::Tag(t) => self.uni(t),
            Symbol::Eos => self.sentences,
            Symbol::Bos => 0,
        }
    }

    pub fn bi(&self, a: Symbol, b: Symbol) -> u64 {
        self.bi.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn tri(&self, a: Symbol, b: Symbol, c: Symbol) -> u64 {
        self.tri.get(&(a, b, c)).copied().unwrap_or(0)
    }

    pub fn emit(&self, word: &str, tag: TagId) -> u64 {
        self.emit
            .get(word)
            .and_then(|row| row.get(&tag))
            .copied()
            .unwrap_or(0)
    }

    /// How often `symbol` is followed by a tag or `EOS`.
    pub fn context_count(&self, symbol: Symbol) -> u64 {
        match symbol {
            Symbol::Bos => self.sentences,
            Symbol::Tag(t) => self.uni(t),
            Symbol::Eos => 0,
        }
    }

    /// Number of predicted positions: every token plus one `EOS` per sentence.
    pub fn outcome_total(&self) -> u64 {
        self.tokens_total + self.sentences
    }

    pub fn sentences(&self) -> u64 {
        self.sentences
    }

    pub fn tokens_total(&self) -> u64 {
        self.tokens_total
    }

    pub fn is_empty(&self) -> bool {
        self.sentences == 0
    }

    pub fn unigrams(&self) -> impl Iterator<Item = (TagId, u64)> + '_ {
        self.uni.iter().map(|(k, v)| (*k, *v))
    }

    pub fn bigrams(&self) -> impl Iterator<Item = ((Symbol, Symbol), u64)> + '_ {
        self.bi.iter().map(|(k, v)| (*k, *v))
    }

    pub fn trigrams(&self) -> impl Iterator<Item = ((Symbol, Symbol, Symbol), u64)> + '_ {
        self.tri.iter().map(|(k, v)| (*k, *v))
    }

    /// `(word, tag, count)` sorted by word, then tag order.
    pub fn emissions(&self) -> impl Iterator<Item = (&str, TagId, u64)> + '_ {
        self.emit
            .iter()
            .flat_map(|(w, row)| row.iter().map(move |(t, c)| (w.as_str(), *t, *c)))
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> + '_ {
        self.emit.keys().map(String::as_str)
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.emit.contains_key(word)
    }

    /// Total occurrences of `word` under any tag.
    pub fn word_count(&self, word: &str) -> u64 {
        self.emit.get(word).map_or(0, |row| row.values().sum())
    }

    /// Tag counts for a single word.
    pub fn word_tags(&self, word: &str) -> impl Iterator<Item = (TagId, u64)> + '_ {
        self.emit
            .get(word)
            .into_iter()
            .flat_map(|row| row.iter().map(|(t, c)| (*t, *c)))
    }

    /// Rebuilds a table from stored sections; sentence and token totals are
    /// derived from the `(BOS,BOS)` bigram and the unigrams.
    pub(crate) fn from_sections(
        tagset: Arc<Tagset>,
        uni: BTreeMap<TagId, u64>,
        bi: BTreeMap<(Symbol, Symbol), u64>,
        tri: BTreeMap<(Symbol, Symbol, Symbol), u64>,
        emit: BTreeMap<String, BTreeMap<TagId, u64>>,
    ) -> Self {
        let sentences = bi.get(&(Symbol::Bos, Symbol::Bos)).copied().unwrap_or(0);
        let tokens_total = uni.values().sum();
        CountsTable {
            tagset,
            uni,
            bi,
            tri,
            emit,
            sentences,
            tokens_total,
        }
    }
}

/// Counts tag n-grams and word/tag pairs over a corpus.
pub fn collect_counts(corpus: &TaggedCorpus) -> Result<CountsTable, ModelError> {
    if corpus.is_empty() {
        return Err(ModelError::EmptyCorpus);
    }
    let tagset = corpus.tagset().clone();
    let count_chunk = |chunk: &[TaggedSentence]| {
        let mut table = CountsTable::empty(tagset.clone());
        for sentence in chunk {
            table.add_sentence(sentence);
        }
        table
    };
    if corpus.len() < PARALLEL_THRESHOLD {
        return Ok(count_chunk(corpus.sentences()));
    }
    let table = corpus
        .sentences()
        .par_chunks(PARALLEL_THRESHOLD / 2)
        .map(count_chunk)
        .reduce(
            || CountsTable::empty(tagset.clone()),
            |mut a, b| {
                a.merge(&b).expect("chunks share one tagset");
                a
            },
        );
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::toy_corpus;

    fn sym(ts: &Tagset, label: &str) -> Symbol {
        ts.symbol(label).unwrap()
    }

    #[test]
    fn toy_counts() {
        let counts = collect_counts(&toy_corpus()).unwrap();
        let ts = counts.tagset().clone();
        let s = |l| sym(&ts, l);
        let id = |l| ts.id(l).unwrap();
        assert_eq!(counts.uni(id("NN")), 2);
        assert_eq!(counts.uni(id("JJ")), 1);
        assert_eq!(counts.uni(id("VM")), 3);
        assert_eq!(counts.unigrams().count(), 3);
        assert_eq!(counts.tri(s("<BOS>"), s("<BOS>"), s("NN")), 2);
        assert_eq!(counts.tri(s("<BOS>"), s("<BOS>"), s("JJ")), 1);
        assert_eq!(counts.tri(s("<BOS>"), s("NN"), s("VM")), 2);
        assert_eq!(counts.tri(s("<BOS>"), s("JJ"), s("VM")), 1);
        assert_eq!(counts.tri(s("NN"), s("VM"), s("<EOS>")), 2);
        assert_eq!(counts.tri(s("JJ"), s("VM"), s("<EOS>")), 1);
        assert_eq!(counts.trigrams().count(), 6);
        assert_eq!(counts.bi(s("<BOS>"), s("<BOS>")), 3);
        assert_eq!(counts.emit("w1", id("NN")), 2);
        assert_eq!(counts.emit("w1", id("JJ")), 1);
        assert_eq!(counts.emit("w2", id("VM")), 2);
        assert_eq!(counts.emit("w3", id("VM")), 1);
        assert_eq!(counts.tokens_total(), 6);
        assert_eq!(counts.outcome_total(), 9);
    }

    #[test]
    fn single_token_sentence() {
        let ts = Arc::new(Tagset::default());
        let corpus = TaggedCorpus::from_labels(ts.clone(), [&[("a", "NN")][..]]).unwrap();
        let counts = collect_counts(&corpus).unwrap();
        let s = |l| sym(&ts, l);
        assert_eq!(
            counts.unigrams().collect::<Vec<_>>(),
            [(ts.id("NN").unwrap(), 1)]
        );
        assert_eq!(counts.tri(s("<BOS>"), s("<BOS>"), s("NN")), 1);
        assert_eq!(counts.tri(s("<BOS>"), s("NN"), s("<EOS>")), 1);
        assert_eq!(counts.trigrams().count(), 2);
    }

    #[test]
    fn empty_corpus_is_rejected() {
        let corpus = TaggedCorpus::new(Arc::new(Tagset::default()), vec![]).unwrap();
        assert_eq!(collect_counts(&corpus), Err(ModelError::EmptyCorpus));
    }

    #[test]
    fn merge_is_pointwise_sum() {
        let corpus = toy_corpus();
        let whole = collect_counts(&corpus).unwrap();
        let mut left = CountsTable::empty(corpus.tagset().clone());
        let mut right = CountsTable::empty(corpus.tagset().clone());
        for (i, s) in corpus.sentences().iter().enumerate() {
            if i % 2 == 0 {
                left.add_sentence(s);
            } else {
                right.add_sentence(s);
            }
        }
        left.merge(&right).unwrap();
        assert_eq!(left, whole);

        let other = CountsTable::empty(Arc::new(Tagset::new(["X"]).unwrap()));
        assert_eq!(left.merge(&other), Err(ModelError::TagsetMismatch));
    }

    #[test]
    fn parallel_counting_matches_sequential() {
        let base = toy_corpus();
        let sentences: Vec<_> = base
            .sentences()
            .iter()
            .cycle()
            .take(PARALLEL_THRESHOLD * 2 + 5)
            .cloned()
            .collect();
        let big = TaggedCorpus::new(base.tagset().clone(), sentences.clone()).unwrap();
        let mut sequential = CountsTable::empty(base.tagset().clone());
        for s in &sentences {
            sequential.add_sentence(s);
        }
        assert_eq!(collect_counts(&big).unwrap(), sequential);
    }
}
