#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use tritag::corpus::{TagId, TaggedCorpus, TaggedSentence, TaggedToken, Tagset, Token};

pub const WORDS: [&str; 8] = ["अ", "घर", "तो", "गेला", "a", "b", "c", "।"];

/// Raw shape of a random corpus: per sentence, (word index, tag index) pairs.
pub type Shape = Vec<Vec<(usize, usize)>>;

pub fn tagset(n: usize) -> Arc<Tagset> {
    Arc::new(Tagset::new((0..n).map(|i| format!("T{i}"))).unwrap())
}

pub fn build(tagset: Arc<Tagset>, shape: &Shape) -> TaggedCorpus {
    let sentences = shape
        .iter()
        .map(|s| {
            TaggedSentence::new(
                s.iter()
                    .map(|&(w, t)| TaggedToken {
                        token: Token::new(WORDS[w % WORDS.len()]).unwrap(),
                        tag: TagId(t),
                    })
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    TaggedCorpus::new(tagset, sentences).unwrap()
}

/// (number of tags, corpus shape) with 1..=max_tags tags.
pub fn corpus_shape(
    max_tags: usize,
    max_sentences: usize,
    max_len: usize,
) -> impl Strategy<Value = (usize, Shape)> {
    (1..=max_tags).prop_flat_map(move |k| {
        let token = (0..WORDS.len(), 0..k);
        let sentence = prop::collection::vec(token, 1..=max_len);
        (Just(k), prop::collection::vec(sentence, 1..=max_sentences))
    })
}

pub fn random_corpus(
    max_tags: usize,
    max_sentences: usize,
    max_len: usize,
) -> impl Strategy<Value = TaggedCorpus> {
    corpus_shape(max_tags, max_sentences, max_len).prop_map(|(k, shape)| build(tagset(k), &shape))
}
