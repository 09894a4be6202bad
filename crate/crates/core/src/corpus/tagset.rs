use std::collections::HashMap;
use std::fmt;

use super::CorpusError;

/// Label written for the left sentence-boundary marker.
pub const BOS_LABEL: &str = "<BOS>";
/// Label written for the right sentence-boundary marker.
pub const EOS_LABEL: &str = "<EOS>";

/// The IL part-of-speech tags used for Marathi annotation, in declaration
/// order. Declaration order doubles as the decoder's tie-breaking order.
pub const DEFAULT_TAGS: [(&str, &str); 23] = [
    ("NN", "Common nouns"),
    ("NST", "Nouns denoting spatial and temporal expressions"),
    ("NNP", "Proper nouns"),
    ("PRP", "Pronoun"),
    ("DEM", "Demonstrative"),
    ("VM", "Verb main (finite or non-finite)"),
    ("VAUX", "Verb auxiliary"),
    ("JJ", "Adjective"),
    ("RB", "Adverb"),
    ("PSP", "Postposition"),
    ("RP", "Particles"),
    ("QF", "Quantifiers"),
    ("QC", "Cardinals"),
    ("CC", "Conjuncts (coordinating and subordinating)"),
    ("WQ", "Question words"),
    ("QO", "Ordinals"),
    ("INTF", "Intensifier"),
    ("INJ", "Interjection"),
    ("NEG", "Negative"),
    ("SYM", "Symbol"),
    ("XC", "Compounds"),
    ("RDP", "Reduplications"),
    ("UNK", "Foreign words"),
];

/// Tags that admit previously unseen words.
pub const DEFAULT_OPEN_CLASS: [&str; 6] = ["NN", "NNP", "VM", "JJ", "RB", "UNK"];

/// Index of a tag inside its [`Tagset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagId(pub usize);

impl TagId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A position in a boundary-padded tag sequence.
///
/// Ordering puts `Bos` first and `Eos` last so sorted count tables read
/// left to right the way a padded sentence does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Bos,
    Tag(TagId),
    Eos,
}

impl From<TagId> for Symbol {
    fn from(id: TagId) -> Self {
        Symbol::Tag(id)
    }
}

/// Closed inventory of permissible tags. Two tagsets are equal when their
/// labels match in order; descriptions are informational.
#[derive(Debug, Clone)]
pub struct Tagset {
    labels: Vec<String>,
    descriptions: Vec<String>,
    index: HashMap<String, TagId>,
}

impl Tagset {
    /// Builds a tagset from labels in declaration order.
    pub fn new<I, S>(labels: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_descriptions(labels.into_iter().map(|l| (l.into(), String::new())))
    }

    pub fn with_descriptions<I>(entries: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut labels = Vec::new();
        let mut descriptions = Vec::new();
        let mut index = HashMap::new();
        for (label, description) in entries {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(CorpusError::InvalidTagset(format!(
                    "tag label {label:?} is empty or contains whitespace"
                )));
            }
            if label == BOS_LABEL || label == EOS_LABEL {
                return Err(CorpusError::InvalidTagset(format!(
                    "tag label {label} is reserved for sentence boundaries"
                )));
            }
            if index.insert(label.clone(), TagId(labels.len())).is_some() {
                return Err(CorpusError::InvalidTagset(format!(
                    "duplicate tag label {label}"
                )));
            }
            labels.push(label);
            descriptions.push(description);
        }
        if labels.is_empty() {
            return Err(CorpusError::InvalidTagset("tagset has no labels".into()));
        }
        Ok(Tagset {
            labels,
            descriptions,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn id(&self, label: &str) -> Option<TagId> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// Label of `id`. Panics if `id` does not belong to this tagset.
    pub fn label(&self, id: TagId) -> &str {
        &self.labels[id.0]
    }

    pub fn description(&self, id: TagId) -> &str {
        &self.descriptions[id.0]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }

    pub fn ids(&self) -> impl Iterator<Item = TagId> {
        (0..self.labels.len()).map(TagId)
    }

    /// Resolves a label, also accepting the two boundary markers.
    pub fn symbol(&self, label: &str) -> Option<Symbol> {
        match label {
            BOS_LABEL => Some(Symbol::Bos),
            EOS_LABEL => Some(Symbol::Eos),
            _ => self.id(label).map(Symbol::Tag),
        }
    }

    pub fn symbol_label(&self, symbol: Symbol) -> &str {
        match symbol {
            Symbol::Bos => BOS_LABEL,
            Symbol::Eos => EOS_LABEL,
            Symbol::Tag(id) => self.label(id),
        }
    }

    /// Whether `id` is a valid index into this tagset.
    pub fn has_id(&self, id: TagId) -> bool {
        id.0 < self.labels.len()
    }
}

impl PartialEq for Tagset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Tagset {}

impl Default for Tagset {
    fn default() -> Self {
        Tagset::with_descriptions(
            DEFAULT_TAGS
                .iter()
                .map(|(l, d)| (l.to_string(), d.to_string())),
        )
        .expect("default tagset is well formed")
    }
}

impl fmt::Display for Tagset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels.join(" "))
    }
}
