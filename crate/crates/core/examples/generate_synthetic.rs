//! Regenerates `data/synthetic-500.tsv`.
//!
//! cargo run -p tritag --example generate_synthetic > crates/core/data/synthetic-500.tsv

use tritag::corpus::write_tagged_corpus;
use tritag::synthetic::{generate_corpus, SyntheticConfig, BUNDLED_SEED};

fn main() {
    let corpus = generate_corpus(&SyntheticConfig::default(), BUNDLED_SEED);
    print!("{}", write_tagged_corpus(&corpus));
}
