use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TaggedCorpus;

/// Shuffles sentences with a seeded generator and cuts the result into a
/// training part holding `round(ratio * len)` sentences and a test part
/// holding the rest. The same seed always yields the same split.
pub fn split_corpus(corpus: &TaggedCorpus, ratio: f64, seed: u64) -> (TaggedCorpus, TaggedCorpus) {
    let ratio = ratio.clamp(0.0, 1.0);
    let mut sentences = corpus.sentences().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sentences.shuffle(&mut rng);
    let cut = ((sentences.len() as f64) * ratio).round() as usize;
    let test = sentences.split_off(cut);
    (
        TaggedCorpus {
            tagset: corpus.tagset().clone(),
            sentences,
        },
        TaggedCorpus {
            tagset: corpus.tagset().clone(),
            sentences: test,
        },
    )
}
