use std::fmt;

use serde::{Deserialize, Serialize};

/// A lowercase, non-empty run of alphanumeric scalar values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Token(String);

impl Token {
    /// Normalizes `s` into a single token. Returns `None` unless `s`
    /// tokenizes to exactly one token.
    pub fn parse(s: &str) -> Option<Token> {
        let mut tokens = tokenize(s);
        if tokens.len() == 1 {
            tokens.pop()
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Length in scalar values.
    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Single-scalar lowercase mapping. `char::to_lowercase` can expand to
/// several scalars (only U+0130 does today); the first one is the simple
/// mapping.
fn simple_lowercase(c: char) -> char {
    c.to_lowercase().next().unwrap_or(c)
}

/// Lowercases and splits `text` on every non-alphanumeric scalar.
pub fn tokenize(text: &str) -> Vec<Token> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|piece| !piece.is_empty())
        .map(|piece| Token(piece.chars().map(simple_lowercase).collect()))
        .collect()
}
