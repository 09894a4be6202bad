use super::{Sentence, Token};

/// Characters that end a sentence in raw text. Each is emitted as a token
/// of its own; a newline also ends the sentence but produces no token.
pub const SENTENCE_TERMINATORS: [char; 3] = ['।', '?', '!'];

/// Splits raw text into sentences and whitespace-separated tokens.
///
/// A run of terminators stays with the sentence it closes, so `"अ?!"` is one
/// sentence of three tokens.
pub fn parse_raw_text(text: &str) -> Vec<Sentence> {
    let mut splitter = Splitter::default();
    for c in text.chars() {
        if c == '\n' {
            splitter.end_sentence();
        } else if SENTENCE_TERMINATORS.contains(&c) {
            splitter.flush_word();
            splitter.push_token(c.encode_utf8(&mut [0; 4]));
            splitter.closing = true;
        } else if c.is_whitespace() {
            splitter.flush_word();
        } else {
            if splitter.closing {
                splitter.end_sentence();
            }
            splitter.word.push(c);
        }
    }
    splitter.end_sentence();
    splitter.sentences
}

#[derive(Default)]
struct Splitter {
    sentences: Vec<Sentence>,
    current: Vec<Token>,
    word: String,
    closing: bool,
}

impl Splitter {
    fn push_token(&mut self, surface: &str) {
        // Surfaces here are non-empty and whitespace-free by construction.
        if let Ok(token) = Token::new(surface) {
            self.current.push(token);
        }
    }

    fn flush_word(&mut self) {
        if !self.word.is_empty() {
            let word = std::mem::take(&mut self.word);
            self.push_token(&word);
        }
    }

    fn end_sentence(&mut self) {
        self.flush_word();
        self.closing = false;
        if !self.current.is_empty() {
            self.sentences
                .push(Sentence(std::mem::take(&mut self.current)));
        }
    }
}
