mod common;

use std::sync::Arc;

use proptest::prelude::*;
use tritag::corpus::{TagId, TaggedCorpus, TaggedSentence, TaggedToken, Tagset};
use tritag::eval::{evaluate, format_percent_half_up, EvalError, EvalReport};

/// Gold corpus plus predicted tags for every token, over one tagset.
fn gold_and_predicted() -> impl Strategy<Value = (TaggedCorpus, TaggedCorpus)> {
    common::corpus_shape(5, 8, 8)
        .prop_flat_map(|(k, shape)| {
            let lens: Vec<usize> = shape.iter().map(Vec::len).collect();
            let predicted = lens
                .into_iter()
                .map(|n| prop::collection::vec(0..k, n))
                .collect::<Vec<_>>();
            (Just(k), Just(shape), predicted)
        })
        .prop_map(|(k, shape, predicted)| {
            let ts = common::tagset(k);
            let gold = common::build(ts.clone(), &shape);
            let pred_shape: common::Shape = shape
                .iter()
                .zip(&predicted)
                .map(|(s, p)| s.iter().zip(p).map(|(&(w, _), &t)| (w, t)).collect())
                .collect();
            (gold, common::build(ts, &pred_shape))
        })
}

fn with_tags(
    corpus: &TaggedCorpus,
    tagset: Arc<Tagset>,
    map: impl Fn(TagId) -> TagId,
) -> TaggedCorpus {
    let sentences = corpus
        .sentences()
        .iter()
        .map(|s| {
            TaggedSentence::new(
                s.tokens()
                    .iter()
                    .map(|t| TaggedToken {
                        token: t.token.clone(),
                        tag: map(t.tag),
                    })
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    TaggedCorpus::new(tagset, sentences).unwrap()
}

fn reordered(corpus: &TaggedCorpus, order: &[usize]) -> TaggedCorpus {
    let sentences = order
        .iter()
        .map(|&i| corpus.sentences()[i].clone())
        .collect();
    TaggedCorpus::new(corpus.tagset().clone(), sentences).unwrap()
}

proptest! {
    #[test]
    fn sentence_order_does_not_matter(
        (gold, predicted) in gold_and_predicted(),
        seed in any::<u64>(),
    ) {
        let mut order: Vec<usize> = (0..gold.len()).collect();
        // Deterministic shuffle driven by the seed.
        let mut x = seed | 1;
        for i in (1..order.len()).rev() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            order.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let a = evaluate(&gold, &predicted).unwrap();
        let b = evaluate(&reordered(&gold, &order), &reordered(&predicted, &order)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn self_evaluation_is_perfect((gold, _) in gold_and_predicted()) {
        let r = evaluate(&gold, &gold).unwrap();
        prop_assert_eq!(r.accuracy_display(), "100.00");
        prop_assert_eq!(r.correct_tokens as usize, gold.token_count());
        for m in r.per_tag.values() {
            prop_assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn relabeling_both_sides_preserves_scores(
        (gold, predicted) in gold_and_predicted(),
        shift in 0usize..5,
    ) {
        let k = gold.tagset().len();
        let renamed = Arc::new(Tagset::new((0..k).map(|i| format!("R{}", (i + shift) % k))).unwrap());
        let perm = |t: TagId| TagId((t.0 + shift) % k);
        let a = evaluate(&gold, &predicted).unwrap();
        let b = evaluate(
            &with_tags(&gold, renamed.clone(), perm),
            &with_tags(&predicted, renamed.clone(), perm),
        )
        .unwrap();
        prop_assert_eq!(a.correct_tokens, b.correct_tokens);
        prop_assert_eq!(a.total_tokens, b.total_tokens);
        prop_assert_eq!(a.accuracy_display(), b.accuracy_display());
        for (label, m) in &a.per_tag {
            let old = gold.tagset().id(label).unwrap();
            let new_label = renamed.label(perm(old));
            prop_assert_eq!(*m, b.metrics(new_label));
        }
    }

    #[test]
    fn micro_averaged_recall_is_accuracy((gold, predicted) in gold_and_predicted()) {
        let r = evaluate(&gold, &predicted).unwrap();
        let hits: u64 = r.per_tag.keys().map(|t| r.confusion.get(t, t)).sum();
        let gold_total: u64 = r.per_tag.keys().map(|t| r.confusion.row_sum(t)).sum();
        let micro = hits as f64 / gold_total as f64;
        prop_assert!((micro - r.accuracy_percent() / 100.0).abs() <= 1e-9);
    }

    #[test]
    fn half_up_formatting_matches_decimal_oracle(num in 0u64..1_000_000, extra in 1u64..1_000_000) {
        let den = num + extra;
        // Oracle: exact decimal expansion to three places, then round on the third digit.
        let thousandths = num * 100_000 / den;
        let hundredths = thousandths / 10 + u64::from(thousandths % 10 >= 5);
        prop_assert_eq!(
            format_percent_half_up(num, den),
            format!("{}.{:02}", hundredths / 100, hundredths % 100)
        );
    }
}

#[test]
fn reference_accuracy_rounds_to_91_63() {
    let r = EvalReport::from_counts(44563, 48635);
    assert_eq!(r.accuracy_display(), "91.63");
    assert!((r.accuracy_percent() - 91.627428).abs() < 1e-6);
}

#[test]
fn misaligned_inputs_are_rejected() {
    let ts = common::tagset(2);
    let gold = common::build(ts.clone(), &vec![vec![(0, 0), (1, 1)]]);
    let short = common::build(ts.clone(), &vec![vec![(0, 0)]]);
    let other_word = common::build(ts.clone(), &vec![vec![(0, 0), (2, 1)]]);
    let two = common::build(ts, &vec![vec![(0, 0), (1, 1)], vec![(0, 0)]]);
    assert!(matches!(
        evaluate(&gold, &short),
        Err(EvalError::SentenceLength { sentence: 1, .. })
    ));
    assert!(matches!(
        evaluate(&gold, &other_word),
        Err(EvalError::SurfaceMismatch {
            sentence: 1,
            token: 2,
            ..
        })
    ));
    assert!(matches!(
        evaluate(&gold, &two),
        Err(EvalError::SentenceCount { .. })
    ));
}
