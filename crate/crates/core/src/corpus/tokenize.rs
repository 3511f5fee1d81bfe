use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Language, Stoplist, TokenSequence};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenizerMode {
    /// Split on runs of whitespace.
    Whitespace,
    /// Whitespace split, then every character that is not alphanumeric or `_`
    /// becomes a token of its own.
    Punctuation,
    /// Input is already tokenized; split on single spaces only.
    Passthrough,
}

impl TokenizerMode {
    fn name(self) -> &'static str {
        match self {
            TokenizerMode::Whitespace => "whitespace",
            TokenizerMode::Punctuation => "punctuation",
            TokenizerMode::Passthrough => "passthrough",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub mode: TokenizerMode,
    #[serde(default)]
    pub subtoken_split: bool,
    #[serde(default)]
    pub lowercase: bool,
    #[serde(default)]
    pub stoplist: Option<Stoplist>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self::passthrough()
    }
}

impl TokenizerConfig {
    pub fn new(mode: TokenizerMode) -> Self {
        Self {
            mode,
            subtoken_split: false,
            lowercase: false,
            stoplist: None,
        }
    }

    pub fn passthrough() -> Self {
        Self::new(TokenizerMode::Passthrough)
    }

    pub fn whitespace() -> Self {
        Self::new(TokenizerMode::Whitespace)
    }

    pub fn punctuation() -> Self {
        Self::new(TokenizerMode::Punctuation)
    }

    pub fn with_subtokens(mut self, on: bool) -> Self {
        self.subtoken_split = on;
        self
    }

    pub fn with_lowercase(mut self, on: bool) -> Self {
        self.lowercase = on;
        self
    }

    pub fn with_stoplist(mut self, stoplist: Option<Stoplist>) -> Self {
        self.stoplist = stoplist;
        self
    }

    /// Stable identifier recorded on every produced sequence, e.g.
    /// `punctuation+subtokens+lowercase`.
    pub fn id(&self) -> String {
        let mut id = self.mode.name().to_string();
        if self.mode != TokenizerMode::Passthrough {
            if self.subtoken_split {
                id.push_str("+subtokens");
            }
            if self.lowercase {
                id.push_str("+lowercase");
            }
        }
        if let Some(stop) = &self.stoplist {
            id.push('+');
            id.push_str(&stop.id());
        }
        id
    }
}

impl fmt::Display for TokenizerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Parses `mode[+subtokens][+lowercase][+stop|+stop-java|+stop-python]`.
impl FromStr for TokenizerConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut parts = s.split('+').map(str::trim);
        let mode = match parts.next().unwrap_or_default().to_ascii_lowercase().as_str() {
            "whitespace" | "ws" => TokenizerMode::Whitespace,
            "punctuation" | "punct" => TokenizerMode::Punctuation,
            "passthrough" | "pre" => TokenizerMode::Passthrough,
            _ => return Err(Error::UnknownTokenizer(s.to_string())),
        };
        let mut cfg = TokenizerConfig::new(mode);
        for part in parts {
            match part.to_ascii_lowercase().as_str() {
                "subtokens" | "split" => cfg.subtoken_split = true,
                "lowercase" | "lc" => cfg.lowercase = true,
                "stop" | "stop-java" => cfg.stoplist = Some(Stoplist::for_language(Language::Java)),
                "stop-python" => cfg.stoplist = Some(Stoplist::for_language(Language::Python)),
                _ => return Err(Error::UnknownTokenizer(s.to_string())),
            }
        }
        Ok(cfg)
    }
}

/// Tokenizes `text`. Subtoken splitting, lowercasing and stoplist filtering
/// are applied in that order when enabled.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> TokenSequence {
    let raw: Vec<String> = match config.mode {
        TokenizerMode::Whitespace => text.split_whitespace().map(str::to_string).collect(),
        TokenizerMode::Punctuation => text.split_whitespace().flat_map(isolate_punctuation).collect(),
        TokenizerMode::Passthrough => text
            .split(' ')
            .flat_map(str::split_whitespace)
            .map(str::to_string)
            .collect(),
    };

    let cased: Vec<String> = if config.mode == TokenizerMode::Passthrough {
        raw
    } else if config.subtoken_split {
        raw.iter().flat_map(|t| split_subtokens(t, config.lowercase)).collect()
    } else if config.lowercase {
        raw.iter().map(|t| t.to_lowercase()).collect()
    } else {
        raw
    };

    let tokens = match &config.stoplist {
        Some(stop) => cased.into_iter().filter(|t| !stop.contains(t)).collect(),
        None => cased,
    };
    TokenSequence::from_valid(tokens, config.id())
}

fn isolate_punctuation(chunk: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in chunk.chars() {
        if c.is_alphanumeric() || c == '_' {
            word.push(c);
        } else {
            if !word.is_empty() {
                out.push(std::mem::take(&mut word));
            }
            out.push(c.to_string());
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Upper,
    Lower,
    Digit,
    Other,
}

fn classify(c: char) -> CharClass {
    if c.is_numeric() {
        CharClass::Digit
    } else if c.is_uppercase() {
        CharClass::Upper
    } else if c.is_alphabetic() {
        // Uncased letters group with lowercase.
        CharClass::Lower
    } else {
        CharClass::Other
    }
}

/// Splits an identifier into its constituent words.
///
/// Boundaries: underscores (dropped), lower→upper (`camelCase`), the end of an
/// uppercase run that is followed by a capitalised word (`HTTPServer`), and any
/// change between letters, digits and other symbols. The original token is
/// not part of the output.
pub fn split_subtokens(token: &str, lowercase: bool) -> Vec<String> {
    let chars: Vec<char> = token.chars().collect();
    let mut parts = Vec::new();
    let mut cur = String::new();

    let flush = |cur: &mut String, parts: &mut Vec<String>| {
        if !cur.is_empty() {
            let part = std::mem::take(cur);
            parts.push(if lowercase { part.to_lowercase() } else { part });
        }
    };

    for (i, &c) in chars.iter().enumerate() {
        if c == '_' {
            flush(&mut cur, &mut parts);
            continue;
        }
        if !cur.is_empty() {
            let prev = classify(chars[i - 1]);
            let here = classify(c);
            let boundary = match (prev, here) {
                (CharClass::Lower, CharClass::Upper) => true,
                (CharClass::Upper, CharClass::Upper) => {
                    chars.get(i + 1).is_some_and(|&n| classify(n) == CharClass::Lower)
                }
                (CharClass::Upper, CharClass::Lower) => false,
                (a, b) => a != b,
            };
            if boundary {
                flush(&mut cur, &mut parts);
            }
        }
        cur.push(c);
    }
    flush(&mut cur, &mut parts);
    parts
}
