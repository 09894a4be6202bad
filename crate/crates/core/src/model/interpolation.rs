use super::{CountsTable, Lambdas, ModelError};

/// Deleted-interpolation weight estimate.
///
/// Every observed trigram `(a,b,c)` with count `n` votes `n` for the order
/// whose estimate stays highest once the trigram itself is removed from
/// the counts: `(tri-1)/(bi(a,b)-1)`, `(bi(b,c)-1)/(ctx(b)-1)` and
/// `(uni(c)-1)/(N-1)`, each taken as 0 when its denominator is at most 1.
/// Ties go to the higher order. The votes are normalized to sum to 1.
pub fn estimate_interpolation_weights(counts: &CountsTable) -> Result<Lambdas, ModelError> {
    let mut votes = [0u64; 3];
    let total = counts.outcome_total();
    for ((a, b, c), n) in counts.trigrams() {
        if n == 0 {
            continue;
        }
        let trigram = depleted(n, counts.bi(a, b));
        let bigram = depleted(counts.bi(b, c), counts.context_count(b));
        let unigram = depleted(counts.unigram(c), total);
        let winner = if trigram >= bigram && trigram >= unigram {
            2
        } else if bigram >= unigram {
            1
        } else {
            0
        };
        votes[winner] += n;
    }
    let sum: u64 = votes.iter().sum();
    if sum == 0 {
        return Err(ModelError::DegenerateCounts);
    }
    let sum = sum as f64;
    let unigram = votes[0] as f64 / sum;
    let bigram = votes[1] as f64 / sum;
    // Trigram weight absorbs rounding so the three sum to 1.
    let trigram = 1.0 - unigram - bigram;
    Ok(Lambdas {
        unigram,
        bigram,
        trigram: trigram.max(0.0),
    })
}

fn depleted(numerator: u64, denominator: u64) -> f64 {
    if denominator <= 1 {
        0.0
    } else {
        numerator.saturating_sub(1) as f64 / (denominator - 1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{toy_corpus, TaggedCorpus, Tagset};
    use crate::model::collect_counts;
    use std::sync::Arc;

    #[test]
    fn toy_weights() {
        // Votes by hand: (BOS,BOS,NN) ties .5/.5 -> tri 2; (BOS,BOS,JJ)
        // all zero -> tri 1; (BOS,NN,VM) ties 1/1 -> tri 2; (BOS,JJ,VM)
        // only unigram 2/8 -> uni 1; (NN,VM,EOS) ties 1/1 -> tri 2;
        // (JJ,VM,EOS) bigram 2/2 -> bi 1. Totals 1, 1, 7 of 9.
        let l = estimate_interpolation_weights(&collect_counts(&toy_corpus()).unwrap()).unwrap();
        assert!((l.unigram - 1.0 / 9.0).abs() < 1e-12);
        assert!((l.bigram - 1.0 / 9.0).abs() < 1e-12);
        assert!((l.trigram - 7.0 / 9.0).abs() < 1e-12);
        assert!((l.unigram + l.bigram + l.trigram - 1.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_contexts_give_pure_trigram() {
        let ts = Arc::new(Tagset::default());
        let s = &[("a", "NN"), ("b", "VM"), ("c", "SYM")][..];
        let corpus = TaggedCorpus::from_labels(ts, [s, s, s]).unwrap();
        let l = estimate_interpolation_weights(&collect_counts(&corpus).unwrap()).unwrap();
        assert_eq!((l.unigram, l.bigram, l.trigram), (0.0, 0.0, 1.0));
    }

    #[test]
    fn empty_counts_are_degenerate() {
        let counts = CountsTable::empty(Arc::new(Tagset::default()));
        assert_eq!(
            estimate_interpolation_weights(&counts),
            Err(ModelError::DegenerateCounts)
        );
    }
}
