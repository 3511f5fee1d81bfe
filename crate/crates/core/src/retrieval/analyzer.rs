use serde::{Deserialize, Serialize};

use crate::corpus::{split_subtokens, tokenize, Stoplist, TokenizerConfig};

/// Turns code text into index terms. The same analyzer must be used when
/// building an index and when querying it, so it is stored on the index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzerConfig {
    pub tokenizer: TokenizerConfig,
    /// Emit each compound identifier followed by its subtokens.
    #[serde(default)]
    pub expand_subtokens: bool,
    /// Applied after expansion.
    #[serde(default)]
    pub stoplist: Option<Stoplist>,
}

impl AnalyzerConfig {
    pub fn new(tokenizer: TokenizerConfig) -> Self {
        Self {
            tokenizer,
            expand_subtokens: false,
            stoplist: None,
        }
    }

    pub fn with_expansion(mut self, on: bool) -> Self {
        self.expand_subtokens = on;
        self
    }

    pub fn with_stoplist(mut self, stoplist: Option<Stoplist>) -> Self {
        self.stoplist = stoplist;
        self
    }

    pub fn analyze(&self, text: &str) -> Vec<String> {
        if !self.expand_subtokens {
            let mut terms = tokenize(text, &self.tokenizer).into_tokens();
            self.filter(&mut terms);
            return terms;
        }
        // Split on the original casing, lowercase afterwards.
        let lowercase = self.tokenizer.lowercase;
        let mut cased = self.tokenizer.clone().with_lowercase(false);
        cased.stoplist = None;
        let mut terms = Vec::new();
        for tok in tokenize(text, &cased).into_tokens() {
            let parts = split_subtokens(&tok, lowercase);
            terms.push(if lowercase { tok.to_lowercase() } else { tok });
            if parts.len() > 1 {
                terms.extend(parts);
            }
        }
        if let Some(stop) = &self.tokenizer.stoplist {
            terms.retain(|t| !stop.contains(t));
        }
        self.filter(&mut terms);
        terms
    }

    fn filter(&self, terms: &mut Vec<String>) {
        if let Some(stop) = &self.stoplist {
            terms.retain(|t| !stop.contains(t));
        }
    }
}
