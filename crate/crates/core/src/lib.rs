//! Trigram part-of-speech tagging.
//!
//! The pipeline is: parse a tab-separated tagged corpus ([`corpus`]),
//! collect tag n-gram and word/tag counts into a [`model::TagModel`],
//! decode new sentences with [`decoder::viterbi_decode`], and score the
//! output against gold tags with [`eval::evaluate`].
//!
//! ```
//! use tritag::corpus::{toy_corpus, Sentence};
//! use tritag::decoder::viterbi_decode;
//! use tritag::model::{collect_counts, Order, SmoothingConfig, TagModel};
//!
//! let counts = collect_counts(&toy_corpus()).unwrap();
//! let model = TagModel::finalize(counts, SmoothingConfig::none(), Order::Trigram).unwrap();
//! let result = viterbi_decode(&model, &Sentence::from_words("w1 w2").unwrap()).unwrap();
//! assert_eq!(result.labels(model.tagset()), ["NN", "VM"]);
//! ```

pub mod baseline;
pub mod corpus;
pub mod decoder;
pub mod eval;
pub mod model;
pub mod synthetic;
