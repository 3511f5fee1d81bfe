//! Corpus ingestion, tokenization and basic statistics.
//!
//! A corpus is a list of (code, comment) examples. Both sides are stored as
//! [`TokenSequence`]s produced by a [`TokenizerConfig`]; the config's id travels
//! with every sequence so scores can always be traced back to the tokenization
//! that produced them.

mod load;
mod stats;
mod stoplist;
mod tokenize;

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use load::{load_jsonl, load_parallel_files, LoadOptions, LoadReport, SkippedLine};
pub use stats::{corpus_stats, CorpusStats, LengthSummary, SideStats};
pub use stoplist::{apply_stoplist, Language, Stoplist};
pub use tokenize::{split_subtokens, tokenize, TokenizerConfig, TokenizerMode};

/// Ordered tokens of one side of an example.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenSequence {
    tokens: Vec<String>,
    tokenizer_id: String,
}

impl TokenSequence {
    /// Builds a sequence, rejecting empty tokens and tokens containing whitespace.
    pub fn new(tokens: Vec<String>, tokenizer_id: impl Into<String>) -> Result<Self> {
        if let Some(bad) = tokens
            .iter()
            .find(|t| t.is_empty() || t.chars().any(char::is_whitespace))
        {
            return Err(Error::InvalidToken(bad.clone()));
        }
        Ok(Self {
            tokens,
            tokenizer_id: tokenizer_id.into(),
        })
    }

    /// Caller guarantees the token invariant.
    pub(crate) fn from_valid(tokens: Vec<String>, tokenizer_id: impl Into<String>) -> Self {
        debug_assert!(tokens
            .iter()
            .all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        Self {
            tokens,
            tokenizer_id: tokenizer_id.into(),
        }
    }

    pub fn empty(tokenizer_id: impl Into<String>) -> Self {
        Self::from_valid(Vec::new(), tokenizer_id)
    }

    /// Splits on ASCII spaces; convenient for fixtures and already-tokenized text.
    pub fn from_spaced(text: &str) -> Self {
        tokenize(text, &TokenizerConfig::passthrough())
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn tokenizer_id(&self) -> &str {
        &self.tokenizer_id
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.tokens
    }

    /// Tokens joined by single spaces.
    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

impl Deref for TokenSequence {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.tokens
    }
}

impl AsRef<[String]> for TokenSequence {
    fn as_ref(&self) -> &[String] {
        &self.tokens
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.joined())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub project: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParallelExample {
    pub id: String,
    pub source: TokenSequence,
    pub target: TokenSequence,
    pub meta: Option<ExampleMeta>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Valid,
    Test,
    #[default]
    Unsplit,
}

/// An immutable list of examples plus its split label.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelCorpus {
    examples: Vec<ParallelExample>,
    split: Split,
    fold: Option<u32>,
}

impl ParallelCorpus {
    pub fn new(examples: Vec<ParallelExample>) -> Self {
        Self {
            examples,
            split: Split::Unsplit,
            fold: None,
        }
    }

    pub fn with_split(mut self, split: Split, fold: Option<u32>) -> Result<Self> {
        if fold.is_some() && !matches!(split, Split::Train | Split::Test) {
            return Err(Error::InvalidFold);
        }
        self.split = split;
        self.fold = fold;
        Ok(self)
    }

    pub fn examples(&self) -> &[ParallelExample] {
        &self.examples
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn fold(&self) -> Option<u32> {
        self.fold
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn sources(&self) -> impl Iterator<Item = &TokenSequence> {
        self.examples.iter().map(|e| &e.source)
    }

    pub fn targets(&self) -> impl Iterator<Item = &TokenSequence> {
        self.examples.iter().map(|e| &e.target)
    }
}
