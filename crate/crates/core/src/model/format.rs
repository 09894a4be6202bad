//! Line-oriented model file.
//!
//! ```text
//! tritag-model<TAB>1
//! order<TAB>3
//! smoothing<TAB>interp<TAB>λ1<TAB>λ2<TAB>λ3     (or `none`, or `addk<TAB>k`)
//! oov<TAB>uniform                               (or `singleton`)
//! tagset<TAB>NN<TAB>NST...
//! open<TAB>NN<TAB>NNP...
//! uni<TAB>tag<TAB>count                         sorted by tag order
//! bi<TAB>a<TAB>b<TAB>count                      sorted, <BOS> first, <EOS> last
//! tri<TAB>a<TAB>b<TAB>c<TAB>count
//! emit<TAB>word<TAB>tag<TAB>count               sorted by word bytes, then tag
//! checksum<TAB>crc32 of every preceding byte, in decimal
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so a reloaded
//! model reproduces every probability bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use super::{
    CountsTable, Lambdas, ModelError, OovMode, Order, Smoothing, SmoothingConfig, TagModel,
};
use crate::corpus::{Symbol, TagId, Tagset};

pub const FORMAT_MAGIC: &str = "tritag-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoadError {
    #[error("unsupported model format version {found} (expected {FORMAT_VERSION})")]
    VersionMismatch { found: String },
    #[error("model file is truncated")]
    Truncated,
    #[error("model checksum mismatch: stored {stored}, computed {computed}")]
    ChecksumMismatch { stored: u32, computed: u32 },
    #[error("model file line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
}

pub fn serialize_model(model: &TagModel) -> Vec<u8> {
    let counts = model.counts();
    let ts = counts.tagset();
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT_MAGIC}\t{FORMAT_VERSION}");
    let _ = writeln!(out, "order\t{}", model.order());
    match model.smoothing().mode {
        Smoothing::None => out.push_str("smoothing\tnone\n"),
        Smoothing::AddK(k) => {
            let _ = writeln!(out, "smoothing\taddk\t{k}");
        }
        Smoothing::Interpolation(l) => {
            let l = l.expect("weights are resolved at finalize");
            let _ = writeln!(
                out,
                "smoothing\tinterp\t{}\t{}\t{}",
                l.unigram, l.bigram, l.trigram
            );
        }
    }
    let _ = writeln!(out, "oov\t{}", model.smoothing().oov.name());
    push_list(&mut out, "tagset", ts.labels());
    push_list(
        &mut out,
        "open",
        model.open_class().iter().map(|t| ts.label(*t)),
    );
    for (tag, n) in counts.unigrams() {
        let _ = writeln!(out, "uni\t{}\t{n}", ts.label(tag));
    }
    for ((a, b), n) in counts.bigrams() {
        let _ = writeln!(
            out,
            "bi\t{}\t{}\t{n}",
            ts.symbol_label(a),
            ts.symbol_label(b)
        );
    }
    for ((a, b, c), n) in counts.trigrams() {
        let _ = writeln!(
            out,
            "tri\t{}\t{}\t{}\t{n}",
            ts.symbol_label(a),
            ts.symbol_label(b),
            ts.symbol_label(c)
        );
    }
    for (word, tag, n) in counts.emissions() {
        let _ = writeln!(out, "emit\t{word}\t{}\t{n}", ts.label(tag));
    }
    let checksum = crc32fast::hash(out.as_bytes());
    let _ = writeln!(out, "checksum\t{checksum}");
    out.into_bytes()
}

pub fn deserialize_model(bytes: &[u8]) -> Result<TagModel, LoadError> {
    let text = std::str::from_utf8(bytes).map_err(|e| LoadError::Malformed {
        line: 0,
        message: format!("not UTF-8: {e}"),
    })?;
    if text.is_empty() {
        return Err(LoadError::Truncated);
    }

    let first = text.split('\n').next().unwrap_or_default();
    match first.split_once('\t') {
        Some((FORMAT_MAGIC, version)) => {
            if version != FORMAT_VERSION.to_string() {
                return Err(LoadError::VersionMismatch {
                    found: version.to_string(),
                });
            }
        }
        _ if FORMAT_MAGIC.starts_with(first) && !text.contains('\n') => {
            return Err(LoadError::Truncated)
        }
        _ => {
            return Err(LoadError::Malformed {
                line: 1,
                message: "missing model header".into(),
            })
        }
    }

    let body = text.strip_suffix('\n').ok_or(LoadError::Truncated)?;
    let (body, checksum_line) = match body.rfind('\n') {
        Some(pos) => (&text[..=pos], &body[pos + 1..]),
        None => return Err(LoadError::Truncated),
    };
    let stored = match checksum_line.split_once('\t') {
        Some(("checksum", digits)) => digits.parse::<u32>().map_err(|_| LoadError::Malformed {
            line: body.lines().count() + 1,
            message: format!("bad checksum {digits:?}"),
        })?,
        _ => return Err(LoadError::Truncated),
    };
    let computed = crc32fast::hash(body.as_bytes());
    if stored != computed {
        return Err(LoadError::ChecksumMismatch { stored, computed });
    }

    Parser::default().parse(body)
}

fn push_list<'a>(out: &mut String, key: &str, items: impl Iterator<Item = &'a str>) {
    out.push_str(key);
    for item in items {
        out.push('\t');
        out.push_str(item);
    }
    out.push('\n');
}

#[derive(Default)]
struct Parser {
    order: Option<Order>,
    smoothing: Option<Smoothing>,
    oov: Option<OovMode>,
    tagset: Option<Arc<Tagset>>,
    open: Option<Vec<TagId>>,
    uni: BTreeMap<TagId, u64>,
    bi: BTreeMap<(Symbol, Symbol), u64>,
    tri: BTreeMap<(Symbol, Symbol, Symbol), u64>,
    emit: BTreeMap<String, BTreeMap<TagId, u64>>,
}

impl Parser {
    fn parse(mut self, body: &str) -> Result<TagModel, LoadError> {
        for (idx, line) in body.lines().enumerate().skip(1) {
            let line_no = idx + 1;
            let fields: Vec<&str> = line.split('\t').collect();
            self.line(&fields).map_err(|message| LoadError::Malformed {
                line: line_no,
                message,
            })?;
        }
        let missing = |what: &str| LoadError::Malformed {
            line: 0,
            message: format!("missing `{what}` header"),
        };
        let tagset = self.tagset.ok_or_else(|| missing("tagset"))?;
        let order = self.order.ok_or_else(|| missing("order"))?;
        let mode = self.smoothing.ok_or_else(|| missing("smoothing"))?;
        let oov = self.oov.ok_or_else(|| missing("oov"))?;
        let open = self.open.ok_or_else(|| missing("open"))?;
        let counts = CountsTable::from_sections(tagset, self.uni, self.bi, self.tri, self.emit);
        Ok(TagModel::finalize_with_open_class(
            counts,
            SmoothingConfig::new(mode, oov),
            order,
            open,
        )?)
    }

    fn line(&mut self, fields: &[&str]) -> Result<(), String> {
        match fields {
            ["order", n] => {
                let n: u8 = n.parse().map_err(|_| format!("bad order {n:?}"))?;
                self.order = Some(Order::try_from(n).map_err(|e| e.to_string())?);
            }
            ["smoothing", "none"] => self.smoothing = Some(Smoothing::None),
            ["smoothing", "addk", k] => {
                self.smoothing = Some(Smoothing::AddK(parse_float(k)?));
            }
            ["smoothing", "interp", a, b, c] => {
                let l = Lambdas {
                    unigram: parse_float(a)?,
                    bigram: parse_float(b)?,
                    trigram: parse_float(c)?,
                };
                self.smoothing = Some(Smoothing::Interpolation(Some(l)));
            }
            ["oov", mode] => self.oov = Some(mode.parse().map_err(|e: ModelError| e.to_string())?),
            ["tagset", labels @ ..] => {
                let ts = Tagset::new(labels.iter().copied()).map_err(|e| e.to_string())?;
                let default = Tagset::default();
                // Keep descriptions when the stored tagset is the default one.
                self.tagset = Some(Arc::new(if ts == default { default } else { ts }));
            }
            ["open", labels @ ..] => {
                let ts = self.tagset()?;
                let ids = labels
                    .iter()
                    .map(|l| ts.id(l).ok_or_else(|| format!("unknown tag {l:?}")))
                    .collect::<Result<_, _>>()?;
                self.open = Some(ids);
            }
            ["uni", tag, n] => {
                let tag = self.tag(tag)?;
                self.uni.insert(tag, parse_count(n)?);
            }
            ["bi", a, b, n] => {
                let key = (self.symbol(a)?, self.symbol(b)?);
                self.bi.insert(key, parse_count(n)?);
            }
            ["tri", a, b, c, n] => {
                let key = (self.symbol(a)?, self.symbol(b)?, self.symbol(c)?);
                self.tri.insert(key, parse_count(n)?);
            }
            ["emit", word, tag, n] => {
                let tag = self.tag(tag)?;
                let n = parse_count(n)?;
                self.emit
                    .entry(word.to_string())
                    .or_default()
                    .insert(tag, n);
            }
            _ => return Err(format!("unrecognized line {:?}", fields.join("\t"))),
        }
        Ok(())
    }

    fn tagset(&self) -> Result<&Arc<Tagset>, String> {
        self.tagset
            .as_ref()
            .ok_or_else(|| "tagset must precede count sections".to_string())
    }

    fn tag(&self, label: &str) -> Result<TagId, String> {
        self.tagset()?
            .id(label)
            .ok_or_else(|| format!("unknown tag {label:?}"))
    }

    fn symbol(&self, label: &str) -> Result<Symbol, String> {
        self.tagset()?
            .symbol(label)
            .ok_or_else(|| format!("unknown tag {label:?}"))
    }
}

fn parse_float(s: &str) -> Result<f64, String> {
    s.parse().map_err(|_| format!("bad number {s:?}"))
}

fn parse_count(s: &str) -> Result<u64, String> {
    s.parse().map_err(|_| format!("bad count {s:?}"))
}
