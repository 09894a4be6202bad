mod common;

use proptest::prelude::*;
use std::sync::Arc;
use tritag::corpus::{
    parse_raw_text, parse_tagged_corpus, validate_corpus, write_tagged_corpus, Tagset,
};

proptest! {
    #[test]
    fn write_then_parse_is_identity(corpus in common::random_corpus(5, 8, 10)) {
        let text = write_tagged_corpus(&corpus);
        let back = parse_tagged_corpus(&text, corpus.tagset().clone()).unwrap();
        prop_assert_eq!(&back, &corpus);
        prop_assert_eq!(write_tagged_corpus(&back), text);
    }

    #[test]
    fn token_count_is_sum_of_lengths(corpus in common::random_corpus(5, 8, 10)) {
        let report = validate_corpus(&corpus);
        let sum: usize = corpus.sentences().iter().map(|s| s.len()).sum();
        prop_assert_eq!(report.tokens, sum);
        prop_assert_eq!(report.sentences, corpus.len());
        prop_assert_eq!(report.tag_frequencies.values().sum::<usize>(), sum);
    }

    #[test]
    fn parsed_tags_belong_to_tagset(labels in prop::collection::vec(0usize..30, 1..40)) {
        // Labels T0..T29 against a tagset of T0..T19: either every tag is a
        // member or parsing fails with a tagset violation.
        let ts = common::tagset(20);
        let text: String = labels.iter().map(|l| format!("w\tT{l}\n")).collect();
        match parse_tagged_corpus(&text, ts.clone()) {
            Ok(c) => {
                for s in c.sentences() {
                    for t in s.tags() {
                        prop_assert!(ts.has_id(t));
                    }
                }
            }
            Err(e) => prop_assert!(labels.iter().any(|&l| l >= 20), "{e}"),
        }
    }

    #[test]
    fn raw_text_tokens_are_nonempty(text in "[अबक ।?!\n]{0,40}") {
        for s in parse_raw_text(&text) {
            prop_assert!(!s.is_empty());
            for t in s.tokens() {
                prop_assert!(!t.as_str().is_empty());
                prop_assert!(!t.as_str().chars().any(char::is_whitespace));
            }
        }
    }
}

#[test]
fn reference_scale_corpus_counts() {
    // 2000 sentences totalling 48635 tokens: 635 sentences of 25 tokens and
    // 1365 of 24.
    let mut text = String::new();
    for i in 0..2000 {
        let len = if i < 635 { 25 } else { 24 };
        for _ in 0..len {
            text.push_str("शब्द\tNN\n");
        }
        text.push('\n');
    }
    let corpus = parse_tagged_corpus(&text, Arc::new(Tagset::default())).unwrap();
    let report = validate_corpus(&corpus);
    assert_eq!(report.sentences, 2000);
    assert_eq!(report.tokens, 48635);
}

#[test]
fn bundled_toy_file_matches_fixture() {
    let text = include_str!("../data/toy.tsv");
    let corpus = parse_tagged_corpus(text, Arc::new(Tagset::default())).unwrap();
    assert_eq!(corpus, tritag::corpus::toy_corpus());
}

#[test]
fn bundled_corpus_regenerates_from_its_seed() {
    let generated =
        tritag::synthetic::generate_corpus(&Default::default(), tritag::synthetic::BUNDLED_SEED);
    assert_eq!(
        tritag::corpus::write_tagged_corpus(&generated),
        tritag::synthetic::BUNDLED_CORPUS
    );
}
