//! Seeded generator for synthetic tagged corpora.
//!
//! Tags follow a second-order Markov process: each `(prev2, prev1)` context
//! has one preferred successor, drawn once per generator from the seed,
//! that is taken with probability `stickiness`; otherwise the successor is
//! uniform over the tags. Words come from a per-tag private lexicon, or
//! with probability `ambiguity` from a shared pool whose words each belong
//! to several tags, so a context-free tagger cannot resolve them.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{TagId, TaggedCorpus, TaggedSentence, TaggedToken, Tagset, Token};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    /// Labels to draw from; must exist in the default tagset.
    pub tags: Vec<&'static str>,
    pub sentences: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub stickiness: f64,
    pub ambiguity: f64,
    pub private_words_per_tag: usize,
    pub shared_words: usize,
    /// How many tags each shared word can carry.
    pub tags_per_shared_word: usize,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            tags: vec!["NN", "VM", "JJ", "PSP", "RB", "PRP"],
            sentences: 500,
            min_len: 4,
            max_len: 12,
            stickiness: 0.8,
            ambiguity: 0.5,
            private_words_per_tag: 20,
            shared_words: 12,
            tags_per_shared_word: 3,
        }
    }
}

/// Generates a corpus over the default tagset. Identical `(config, seed)`
/// pairs produce identical corpora.
pub fn generate_corpus(config: &SyntheticConfig, seed: u64) -> TaggedCorpus {
    let tagset = Arc::new(Tagset::default());
    let tags: Vec<TagId> = config
        .tags
        .iter()
        .map(|l| {
            tagset
                .id(l)
                .expect("synthetic tags come from the default tagset")
        })
        .collect();
    let k = tags.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Context index k stands for BOS.
    let preferred: Vec<usize> = (0..(k + 1) * (k + 1))
        .map(|_| rng.gen_range(0..k))
        .collect();

    let private: Vec<Vec<String>> = (0..k)
        .map(|t| {
            (0..config.private_words_per_tag)
                .map(|i| format!("{}{}", config.tags[t].to_lowercase(), i))
                .collect()
        })
        .collect();
    let mut shared_by_tag: Vec<Vec<String>> = vec![Vec::new(); k];
    for i in 0..config.shared_words {
        let mut owners: Vec<usize> = (0..k).collect();
        owners.shuffle(&mut rng);
        for &t in owners.iter().take(config.tags_per_shared_word.min(k)) {
            shared_by_tag[t].push(format!("amb{i}"));
        }
    }

    let mut sentences = Vec::with_capacity(config.sentences);
    for _ in 0..config.sentences {
        let len = rng.gen_range(config.min_len..=config.max_len);
        let (mut a, mut b) = (k, k);
        let mut tokens = Vec::with_capacity(len);
        for _ in 0..len {
            let c = if rng.gen_bool(config.stickiness) {
                preferred[a * (k + 1) + b]
            } else {
                rng.gen_range(0..k)
            };
            let pool = if !shared_by_tag[c].is_empty() && rng.gen_bool(config.ambiguity) {
                &shared_by_tag[c]
            } else {
                &private[c]
            };
            let word = pool.choose(&mut rng).expect("lexicons are non-empty");
            tokens.push(TaggedToken {
                token: Token::new(word).expect("generated words are valid tokens"),
                tag: tags[c],
            });
            a = b;
            b = c;
        }
        sentences.push(TaggedSentence::new(tokens).expect("min_len is positive"));
    }
    TaggedCorpus::new(tagset, sentences).expect("tags come from the tagset")
}

/// Seed of the bundled 500-sentence corpus.
pub const BUNDLED_SEED: u64 = 7;

/// The bundled synthetic corpus, as shipped in `data/synthetic-500.tsv`.
pub const BUNDLED_CORPUS: &str = include_str!("../data/synthetic-500.tsv");
