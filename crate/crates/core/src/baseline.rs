//! Context-free baseline: each word gets the tag it carried most often in
//! training; unseen words get the most frequent tag overall.

use std::collections::HashMap;

use crate::corpus::{Sentence, TagId, TaggedCorpus, TaggedSentence};
use crate::model::{collect_counts, ModelError};

#[derive(Debug, Clone)]
pub struct MostFrequentTagger {
    by_word: HashMap<String, TagId>,
    fallback: TagId,
}

impl MostFrequentTagger {
    pub fn train(corpus: &TaggedCorpus) -> Result<Self, ModelError> {
        let counts = collect_counts(corpus)?;
        let argmax = |it: &mut dyn Iterator<Item = (TagId, u64)>| {
            // Earliest tag wins ties.
            it.fold(None, |best: Option<(TagId, u64)>, (t, n)| match best {
                Some((_, bn)) if bn >= n => best,
                _ => Some((t, n)),
            })
            .map(|(t, _)| t)
        };
        let by_word = counts
            .vocabulary()
            .map(|w| {
                let tag = argmax(&mut counts.word_tags(w)).expect("seen words have a tag");
                (w.to_string(), tag)
            })
            .collect();
        let fallback = argmax(&mut counts.unigrams()).unwrap_or(TagId(0));
        Ok(MostFrequentTagger { by_word, fallback })
    }

    pub fn tag(&self, sentence: &Sentence) -> TaggedSentence {
        let tags: Vec<TagId> = sentence
            .tokens()
            .iter()
            .map(|t| {
                self.by_word
                    .get(t.as_str())
                    .copied()
                    .unwrap_or(self.fallback)
            })
            .collect();
        TaggedSentence::from_parts(sentence, &tags).expect("one tag per token")
    }
}
