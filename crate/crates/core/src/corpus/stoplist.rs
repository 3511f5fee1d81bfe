use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::TokenSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Python,
}

const JAVA_KEYWORDS: [&str; 30] = [
    "abstract",
    "boolean",
    "catch",
    "class",
    "else",
    "extends",
    "false",
    "final",
    "for",
    "if",
    "implements",
    "import",
    "int",
    "interface",
    "new",
    "null",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "static",
    "super",
    "this",
    "throw",
    "throws",
    "true",
    "try",
    "void",
    "while",
];

const PYTHON_KEYWORDS: [&str; 30] = [
    "and", "as", "assert", "break", "class", "continue", "def", "del", "elif", "else", "except", "False", "finally",
    "for", "from", "if", "import", "in", "is", "lambda", "None", "not", "or", "pass", "raise", "return", "self",
    "True", "try", "while",
];

/// A set of words to drop, optionally also dropping tokens made only of
/// punctuation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stoplist {
    words: BTreeSet<String>,
    #[serde(default)]
    drop_punctuation: bool,
    #[serde(default)]
    label: String,
}

impl Stoplist {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            words: words.into_iter().map(Into::into).collect(),
            drop_punctuation: false,
            label: "stop".to_string(),
        }
    }

    /// The language's reserved keywords plus standalone punctuation tokens.
    pub fn for_language(lang: Language) -> Self {
        let (words, label): (&[&str], _) = match lang {
            Language::Java => (&JAVA_KEYWORDS, "stop-java"),
            Language::Python => (&PYTHON_KEYWORDS, "stop-python"),
        };
        Self {
            words: words.iter().map(|w| w.to_string()).collect(),
            drop_punctuation: true,
            label: label.to_string(),
        }
    }

    /// The `k` most frequent tokens across `sequences` (ties broken
    /// lexicographically).
    pub fn top_k<'a, I>(sequences: I, k: usize) -> Self
    where
        I: IntoIterator<Item = &'a TokenSequence>,
    {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for seq in sequences {
            for t in seq.iter() {
                *counts.entry(t.as_str()).or_default() += 1;
            }
        }
        let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        Self {
            words: ranked.into_iter().take(k).map(|(w, _)| w.to_string()).collect(),
            drop_punctuation: false,
            label: format!("stop-top{k}"),
        }
    }

    pub fn merged(mut self, other: &Stoplist) -> Self {
        self.words.extend(other.words.iter().cloned());
        self.drop_punctuation |= other.drop_punctuation;
        self
    }

    pub fn with_punctuation(mut self, on: bool) -> Self {
        self.drop_punctuation = on;
        self
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token) || (self.drop_punctuation && token.chars().all(|c| !c.is_alphanumeric() && c != '_'))
    }

    pub fn words(&self) -> &BTreeSet<String> {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty() && !self.drop_punctuation
    }

    pub(crate) fn id(&self) -> String {
        if self.label.is_empty() {
            "stop".to_string()
        } else {
            self.label.clone()
        }
    }
}

/// Order-preserving removal of every token found in `stoplist`.
pub fn apply_stoplist(tokens: &TokenSequence, stoplist: &Stoplist) -> TokenSequence {
    let kept = tokens.iter().filter(|t| !stoplist.contains(t)).cloned().collect();
    TokenSequence::from_valid(kept, tokens.tokenizer_id())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(s: &str) -> TokenSequence {
        TokenSequence::from_spaced(s)
    }

    #[test]
    fn filters_in_order() {
        let stop = Stoplist::from_words(["public", "void"]);
        assert_eq!(apply_stoplist(&seq("public void foo"), &stop).tokens(), ["foo"]);
        assert_eq!(
            apply_stoplist(&seq("a b c"), &Stoplist::default()).tokens(),
            ["a", "b", "c"]
        );
        assert!(apply_stoplist(&seq("public void"), &stop).is_empty());
    }

    #[test]
    fn language_lists_drop_punctuation() {
        let stop = Stoplist::for_language(Language::Java);
        assert_eq!(stop.words().len(), 30);
        assert_eq!(Stoplist::for_language(Language::Python).words().len(), 30);
        let out = apply_stoplist(&seq("public int foo ( ) { return x_1 ; }"), &stop);
        assert_eq!(out.tokens(), ["foo", "x_1"]);
    }

    #[test]
    fn top_k_breaks_ties_lexically() {
        let a = seq("x y y z z");
        let b = seq("x w");
        let stop = Stoplist::top_k([&a, &b], 2);
        assert_eq!(stop.words().iter().collect::<Vec<_>>(), ["x", "y"]);
    }

    proptest! {
        #[test]
        fn union_equals_composition(
            toks in proptest::collection::vec("[a-e]{1,2}", 0..20),
            s1 in proptest::collection::btree_set("[a-e]{1,2}", 0..5),
            s2 in proptest::collection::btree_set("[a-e]{1,2}", 0..5),
        ) {
            let x = TokenSequence::new(toks, "t").unwrap();
            let a = Stoplist::from_words(s1.clone());
            let b = Stoplist::from_words(s2.clone());
            let union = Stoplist::from_words(s1.union(&s2).cloned());
            prop_assert_eq!(
                apply_stoplist(&x, &union),
                apply_stoplist(&apply_stoplist(&x, &a), &b)
            );
        }
    }
}
