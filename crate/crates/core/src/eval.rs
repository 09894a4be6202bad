//! Token-level accuracy, confusion matrix and per-tag precision/recall/F1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::corpus::TaggedCorpus;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("gold has {gold} sentences but predictions have {predicted}")]
    SentenceCount { gold: usize, predicted: usize },
    #[error("sentence {sentence}: gold has {gold} tokens but prediction has {predicted}")]
    SentenceLength {
        sentence: usize,
        gold: usize,
        predicted: usize,
    },
    #[error("sentence {sentence}, token {token}: gold {gold:?} vs predicted {predicted:?}")]
    SurfaceMismatch {
        sentence: usize,
        token: usize,
        gold: String,
        predicted: String,
    },
}

/// Counts of `(gold tag, predicted tag)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    cells: BTreeMap<(String, String), u64>,
}

impl ConfusionMatrix {
    pub fn add(&mut self, gold: &str, predicted: &str) {
        *self
            .cells
            .entry((gold.to_string(), predicted.to_string()))
            .or_default() += 1;
    }

    pub fn get(&self, gold: &str, predicted: &str) -> u64 {
        self.cells
            .get(&(gold.to_string(), predicted.to_string()))
            .copied()
            .unwrap_or(0)
    }

    /// Non-zero cells in `(gold, predicted)` order.
    pub fn cells(&self) -> impl Iterator<Item = (&str, &str, u64)> + '_ {
        self.cells
            .iter()
            .map(|((g, p), n)| (g.as_str(), p.as_str(), *n))
    }

    /// Every tag that occurs as gold or predicted.
    pub fn labels(&self) -> BTreeSet<&str> {
        self.cells
            .keys()
            .flat_map(|(g, p)| [g.as_str(), p.as_str()])
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.cells.values().sum()
    }

    pub fn diagonal(&self) -> u64 {
        self.cells
            .iter()
            .filter(|((g, p), _)| g == p)
            .map(|(_, n)| n)
            .sum()
    }

    pub fn row_sum(&self, gold: &str) -> u64 {
        self.cells
            .iter()
            .filter(|((g, _), _)| g == gold)
            .map(|(_, n)| n)
            .sum()
    }

    pub fn column_sum(&self, predicted: &str) -> u64 {
        self.cells
            .iter()
            .filter(|((_, p), _)| p == predicted)
            .map(|(_, n)| n)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TagMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1 for every label in the matrix; 0/0 is 0.
pub fn per_tag_metrics(confusion: &ConfusionMatrix) -> BTreeMap<String, TagMetrics> {
    confusion
        .labels()
        .into_iter()
        .map(|tag| {
            let hit = confusion.get(tag, tag);
            let precision = ratio(hit, confusion.column_sum(tag));
            let recall = ratio(hit, confusion.row_sum(tag));
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            (
                tag.to_string(),
                TagMetrics {
                    precision,
                    recall,
                    f1,
                },
            )
        })
        .collect()
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    pub total_tokens: u64,
    pub correct_tokens: u64,
    pub confusion: ConfusionMatrix,
    pub per_tag: BTreeMap<String, TagMetrics>,
}

impl EvalReport {
    /// Builds a report from the two counts alone, with an empty confusion
    /// matrix.
    pub fn from_counts(correct_tokens: u64, total_tokens: u64) -> Self {
        EvalReport {
            total_tokens,
            correct_tokens,
            ..Default::default()
        }
    }

    /// Correct tokens as a percentage of all tokens, at full precision.
    pub fn accuracy_percent(&self) -> f64 {
        if self.total_tokens == 0 {
            0.0
        } else {
            100.0 * self.correct_tokens as f64 / self.total_tokens as f64
        }
    }

    /// Accuracy rounded half-up to two decimals, e.g. `"91.63"`.
    pub fn accuracy_display(&self) -> String {
        format_percent_half_up(self.correct_tokens, self.total_tokens)
    }

    /// Metrics for `tag`; all zero if it never occurred.
    pub fn metrics(&self, tag: &str) -> TagMetrics {
        self.per_tag.get(tag).copied().unwrap_or_default()
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tokens    {}", self.total_tokens);
        let _ = writeln!(out, "correct   {}", self.correct_tokens);
        let _ = writeln!(out, "accuracy  {}%", self.accuracy_display());
        if !self.per_tag.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "{:<8} {:>9} {:>9} {:>9} {:>8}",
                "tag", "precision", "recall", "f1", "gold"
            );
            for (tag, m) in &self.per_tag {
                let _ = writeln!(
                    out,
                    "{:<8} {:>9.4} {:>9.4} {:>9.4} {:>8}",
                    tag,
                    m.precision,
                    m.recall,
                    m.f1,
                    self.confusion.row_sum(tag)
                );
            }
        }
        out
    }

    /// Machine-readable dump: `key=value` lines followed by the non-zero
    /// confusion cells and per-tag metrics, tab separated.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "total_tokens={}", self.total_tokens);
        let _ = writeln!(out, "correct_tokens={}", self.correct_tokens);
        let _ = writeln!(out, "accuracy_percent={}", self.accuracy_display());
        for (gold, predicted, n) in self.confusion.cells() {
            let _ = writeln!(out, "confusion\t{gold}\t{predicted}\t{n}");
        }
        for (tag, m) in &self.per_tag {
            let _ = writeln!(
                out,
                "tag\t{tag}\t{:.6}\t{:.6}\t{:.6}",
                m.precision, m.recall, m.f1
            );
        }
        out
    }
}

/// `100 * num / den` rounded half-up to two decimals using integer
/// arithmetic only.
pub fn format_percent_half_up(num: u64, den: u64) -> String {
    if den == 0 {
        return "0.00".to_string();
    }
    let (num, den) = (num as u128, den as u128);
    let hundredths = (num * 20_000 + den) / (2 * den);
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// Compares predicted tags to gold tags token by token.
pub fn evaluate(gold: &TaggedCorpus, predicted: &TaggedCorpus) -> Result<EvalReport, EvalError> {
    if gold.len() != predicted.len() {
        return Err(EvalError::SentenceCount {
            gold: gold.len(),
            predicted: predicted.len(),
        });
    }
    let mut confusion = ConfusionMatrix::default();
    let mut correct = 0u64;
    let mut total = 0u64;
    for (s, (g, p)) in gold
        .sentences()
        .iter()
        .zip(predicted.sentences())
        .enumerate()
    {
        if g.len() != p.len() {
            return Err(EvalError::SentenceLength {
                sentence: s + 1,
                gold: g.len(),
                predicted: p.len(),
            });
        }
        for (t, (gt, pt)) in g.tokens().iter().zip(p.tokens()).enumerate() {
            if gt.token != pt.token {
                return Err(EvalError::SurfaceMismatch {
                    sentence: s + 1,
                    token: t + 1,
                    gold: gt.token.to_string(),
                    predicted: pt.token.to_string(),
                });
            }
            let gl = gold.tagset().label(gt.tag);
            let pl = predicted.tagset().label(pt.tag);
            if gl == pl {
                correct += 1;
            }
            total += 1;
            confusion.add(gl, pl);
        }
    }
    let per_tag = per_tag_metrics(&confusion);
    Ok(EvalReport {
        total_tokens: total,
        correct_tokens: correct,
        confusion,
        per_tag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{toy_corpus, Tagset};
    use std::sync::Arc;

    #[test]
    fn reported_figure_rounds_to_91_63() {
        assert_eq!(format_percent_half_up(44563, 48635), "91.63");
        let r = EvalReport::from_counts(44563, 48635);
        assert_eq!(r.accuracy_display(), "91.63");
        // Unrounded value is 91.6274...
        assert!((r.accuracy_percent() - 91.6274).abs() < 1e-4);
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(format_percent_half_up(1, 8), "12.50");
        assert_eq!(format_percent_half_up(1, 80_000), "0.00");
        // 1/16000 = 0.00625% -> 0.01 with half-up.
        assert_eq!(format_percent_half_up(1, 16_000), "0.01");
        assert_eq!(format_percent_half_up(3, 3), "100.00");
        assert_eq!(format_percent_half_up(0, 0), "0.00");
    }

    #[test]
    fn identity_is_perfect() {
        let c = toy_corpus();
        let r = evaluate(&c, &c).unwrap();
        assert_eq!(r.accuracy_display(), "100.00");
        assert!(r.confusion.cells().all(|(g, p, _)| g == p));
        for m in r.per_tag.values() {
            assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
        }
        assert_eq!(r.metrics("PSP"), TagMetrics::default());
    }

    #[test]
    fn one_error_in_two() {
        let ts = Arc::new(Tagset::default());
        let gold =
            TaggedCorpus::from_labels(ts.clone(), [&[("a", "NN"), ("b", "VM")][..]]).unwrap();
        let pred = TaggedCorpus::from_labels(ts, [&[("a", "VM"), ("b", "VM")][..]]).unwrap();
        let r = evaluate(&gold, &pred).unwrap();
        assert_eq!(r.accuracy_display(), "50.00");
        assert_eq!(r.confusion.get("NN", "VM"), 1);
        assert_eq!(r.confusion.get("VM", "VM"), 1);
        assert_eq!(r.confusion.total(), 2);
        assert_eq!(r.metrics("NN").recall, 0.0);
        let vm = r.metrics("VM");
        assert_eq!(vm.precision, 0.5);
        assert_eq!(vm.recall, 1.0);
        assert!((vm.f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn misalignment_is_located() {
        let ts = Arc::new(Tagset::default());
        let gold =
            TaggedCorpus::from_labels(ts.clone(), [&[("a", "NN"), ("b", "VM")][..]]).unwrap();
        let other =
            TaggedCorpus::from_labels(ts.clone(), [&[("a", "NN"), ("c", "VM")][..]]).unwrap();
        assert_eq!(
            evaluate(&gold, &other).unwrap_err(),
            EvalError::SurfaceMismatch {
                sentence: 1,
                token: 2,
                gold: "b".into(),
                predicted: "c".into()
            }
        );
        let short = TaggedCorpus::from_labels(ts.clone(), [&[("a", "NN")][..]]).unwrap();
        assert!(matches!(
            evaluate(&gold, &short),
            Err(EvalError::SentenceLength { sentence: 1, .. })
        ));
        let two = TaggedCorpus::from_labels(ts, [&[("a", "NN")][..], &[("a", "NN")][..]]).unwrap();
        assert!(matches!(
            evaluate(&gold, &two),
            Err(EvalError::SentenceCount {
                gold: 1,
                predicted: 2
            })
        ));
    }

    #[test]
    fn serializers_are_stable() {
        let c = toy_corpus();
        let r = evaluate(&c, &c).unwrap();
        assert_eq!(
            r.to_key_values(),
            "total_tokens=6\ncorrect_tokens=6\naccuracy_percent=100.00\n\
             confusion\tJJ\tJJ\t1\nconfusion\tNN\tNN\t2\nconfusion\tVM\tVM\t3\n\
             tag\tJJ\t1.000000\t1.000000\t1.000000\n\
             tag\tNN\t1.000000\t1.000000\t1.000000\n\
             tag\tVM\t1.000000\t1.000000\t1.000000\n"
        );
        assert!(r.to_table().contains("accuracy  100.00%"));
    }
}
