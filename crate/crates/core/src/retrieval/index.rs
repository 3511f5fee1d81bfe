use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::analyzer::AnalyzerConfig;
use crate::corpus::{ParallelCorpus, TokenSequence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.2, b: 0.75 }
    }
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self> {
        if !(k1 >= 0.0 && k1.is_finite()) {
            return Err(Error::InvalidParameter(format!("k1 must be >= 0, got {k1}")));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::InvalidParameter(format!("b must be in [0, 1], got {b}")));
        }
        Ok(Self { k1, b })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hit {
    pub doc: usize,
    pub score: f64,
}

/// Frozen inverted index over training sources. Each document's payload is
/// the target comment of the same example.
#[derive(Debug, Clone, PartialEq)]
pub struct Index {
    pub(super) postings: BTreeMap<String, Vec<Posting>>,
    pub(super) doc_lengths: Vec<u32>,
    pub(super) avgdl: f64,
    pub(super) ids: Vec<String>,
    pub(super) payloads: Vec<TokenSequence>,
    pub(super) analyzer: AnalyzerConfig,
}

pub(super) fn mean_length(doc_lengths: &[u32]) -> f64 {
    let total: u64 = doc_lengths.iter().map(|&d| d as u64).sum();
    total as f64 / doc_lengths.len() as f64
}

pub fn build_index(train: &ParallelCorpus, analyzer: AnalyzerConfig) -> Result<Index> {
    if train.is_empty() {
        return Err(Error::EmptyInput("training corpus"));
    }
    if train.len() > u32::MAX as usize {
        return Err(Error::InvalidParameter("too many documents".into()));
    }
    let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
    let mut doc_lengths = Vec::with_capacity(train.len());
    for (doc, ex) in train.examples().iter().enumerate() {
        let terms = analyzer.analyze(&ex.source.joined());
        doc_lengths.push(terms.len() as u32);
        let mut tf: BTreeMap<String, u32> = BTreeMap::new();
        for t in terms {
            *tf.entry(t).or_default() += 1;
        }
        for (term, tf) in tf {
            postings.entry(term).or_default().push(Posting { doc: doc as u32, tf });
        }
    }
    Ok(Index {
        avgdl: mean_length(&doc_lengths),
        postings,
        doc_lengths,
        ids: train.examples().iter().map(|e| e.id.clone()).collect(),
        payloads: train.examples().iter().map(|e| e.target.clone()).collect(),
        analyzer,
    })
}

impl Index {
    pub fn n_docs(&self) -> usize {
        self.doc_lengths.len()
    }

    pub fn avgdl(&self) -> f64 {
        self.avgdl
    }

    pub fn doc_length(&self, doc: usize) -> Option<u32> {
        self.doc_lengths.get(doc).copied()
    }

    pub fn df(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    pub fn postings(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map_or(&[], Vec::as_slice)
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn analyzer(&self) -> &AnalyzerConfig {
        &self.analyzer
    }

    pub fn doc_id(&self, doc: usize) -> Option<&str> {
        self.ids.get(doc).map(String::as_str)
    }

    pub fn payload(&self, doc: usize) -> Option<&TokenSequence> {
        self.payloads.get(doc)
    }

    /// ln(1 + (N − df + 0.5) / (df + 0.5)); always positive.
    pub fn idf(&self, term: &str) -> f64 {
        let n = self.n_docs() as f64;
        let df = self.df(term) as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    fn term_weight(&self, idf: f64, tf: u32, doc: usize, params: Bm25Params) -> f64 {
        let tf = tf as f64;
        let dl = self.doc_lengths[doc] as f64;
        // avgdl is 0 only when every document is empty, and then no term
        // can match.
        let norm = if self.avgdl > 0.0 { dl / self.avgdl } else { 0.0 };
        idf * tf * (params.k1 + 1.0) / (tf + params.k1 * (1.0 - params.b + params.b * norm))
    }

    /// BM25 of one document. Query terms count with multiplicity.
    pub fn score_doc(&self, query_terms: &[String], doc: usize, params: Bm25Params) -> Result<f64> {
        if doc >= self.n_docs() {
            return Err(Error::UnknownDocument(doc));
        }
        let mut score = 0.0;
        for t in query_terms {
            let list = self.postings(t);
            if let Ok(i) = list.binary_search_by_key(&(doc as u32), |p| p.doc) {
                score += self.term_weight(self.idf(t), list[i].tf, doc, params);
            }
        }
        Ok(score)
    }

    /// Top-k documents for already analyzed terms. Scores are accumulated in
    /// query order, so they equal `score_doc` exactly.
    pub fn retrieve_terms(&self, query_terms: &[String], k: usize, params: Bm25Params) -> Vec<Hit> {
        let mut acc: HashMap<usize, f64> = HashMap::new();
        let mut idf_cache: HashMap<&str, f64> = HashMap::new();
        for t in query_terms {
            let list = self.postings(t);
            if list.is_empty() {
                continue;
            }
            let idf = *idf_cache.entry(t.as_str()).or_insert_with(|| self.idf(t));
            for p in list {
                let doc = p.doc as usize;
                *acc.entry(doc).or_insert(0.0) += self.term_weight(idf, p.tf, doc, params);
            }
        }
        let mut hits: Vec<Hit> = acc.into_iter().map(|(doc, score)| Hit { doc, score }).collect();
        hits.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.doc.cmp(&b.doc)));
        hits.truncate(k);
        hits
    }

    pub fn retrieve(&self, code: &str, k: usize, params: Bm25Params) -> Vec<Hit> {
        self.retrieve_terms(&self.analyzer.analyze(code), k, params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ParallelExample, Stoplist, TokenizerConfig};
    use proptest::prelude::*;

    pub(crate) fn corpus(pairs: &[(&str, &str)]) -> ParallelCorpus {
        ParallelCorpus::new(
            pairs
                .iter()
                .enumerate()
                .map(|(i, (s, t))| ParallelExample {
                    id: format!("d{i}"),
                    source: TokenSequence::from_spaced(s),
                    target: TokenSequence::from_spaced(t),
                    meta: None,
                })
                .collect(),
        )
    }

    fn terms(s: &str) -> Vec<String> {
        s.split(' ').map(str::to_string).collect()
    }

    fn fixture() -> Index {
        build_index(
            &corpus(&[
                ("int get size", "returns the size"),
                ("void set size int", "sets the size"),
                ("void clear list", "clears the list"),
            ]),
            AnalyzerConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn fixture_postings_match_hand_built_lists() {
        let idx = fixture();
        let p = |doc, tf| Posting { doc, tf };
        assert_eq!(idx.postings("int"), [p(0, 1), p(1, 1)]);
        assert_eq!(idx.postings("size"), [p(0, 1), p(1, 1)]);
        assert_eq!(idx.postings("void"), [p(1, 1), p(2, 1)]);
        assert_eq!(idx.postings("get"), [p(0, 1)]);
        assert_eq!(idx.postings("set"), [p(1, 1)]);
        assert_eq!(idx.postings("clear"), [p(2, 1)]);
        assert_eq!(idx.postings("list"), [p(2, 1)]);
        assert_eq!(idx.terms().count(), 7);
        assert_eq!(idx.doc_lengths, [3, 4, 3]);
        assert_eq!(idx.avgdl(), 10.0 / 3.0);
        assert_eq!(idx.n_docs(), 3);
    }

    #[test]
    fn fixture_scores_by_hand() {
        // N = 3, avgdl = 10/3. df = 2 gives idf = ln(1 + 1.5/2.5) = ln 1.6,
        // df = 1 gives ln(1 + 2.5/1.5) = ln(8/3).
        // Query "void set": doc 1 (dl 4) matches both, doc 2 (dl 3) matches void.
        // tf-part at dl 3: 2.2 / (1 + 1.2 (0.25 + 0.75 · 0.9)) = 2.2 / 2.11
        // tf-part at dl 4: 2.2 / (1 + 1.2 (0.25 + 0.75 · 1.2)) = 2.2 / 2.38
        let idx = fixture();
        let params = Bm25Params::default();
        let d1 = (1.6f64.ln() + (8.0f64 / 3.0).ln()) * 2.2 / 2.38;
        let d2 = 1.6f64.ln() * 2.2 / 2.11;
        let hits = idx.retrieve("void set", 10, params);
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].doc, 1);
        assert_eq!(hits[1].doc, 2);
        assert!((hits[0].score - d1).abs() < 1e-12);
        assert!((hits[1].score - d2).abs() < 1e-12);
        assert!((hits[0].score - 1.3411).abs() < 1e-4);
        assert!((hits[1].score - 0.4901).abs() < 1e-4);
        assert_eq!(idx.score_doc(&terms("void set"), 0, params).unwrap(), 0.0);
        assert!(idx.score_doc(&terms("void"), 3, params).is_err());
    }

    #[test]
    fn single_matching_term_at_average_length() {
        let params = Bm25Params::default();
        let q = terms("alpha");
        // N = 1, df = 1: idf = ln(1 + 0.5/1.5).
        let one = build_index(&corpus(&[("alpha", "x")]), AnalyzerConfig::default()).unwrap();
        let expect = (4.0f64 / 3.0).ln() * (params.k1 + 1.0) / (1.0 + params.k1);
        assert!((one.score_doc(&q, 0, params).unwrap() - expect).abs() < 1e-12);
        assert_eq!(one.avgdl(), 1.0);
        // N = 2, df = 1: idf = ln(1 + 1.5/1.5) = ln 2.
        let two = build_index(&corpus(&[("alpha", "x"), ("beta", "y")]), AnalyzerConfig::default()).unwrap();
        let expect = 2f64.ln() * (params.k1 + 1.0) / (1.0 + params.k1);
        assert!((two.score_doc(&q, 0, params).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn stopped_document_is_unreachable() {
        let analyzer = AnalyzerConfig::new(TokenizerConfig::whitespace())
            .with_stoplist(Some(Stoplist::from_words(["public", "void"])));
        let idx = build_index(&corpus(&[("public void", "a"), ("run it", "b")]), analyzer).unwrap();
        assert_eq!(idx.doc_length(0), Some(0));
        assert_eq!(idx.avgdl(), 1.0);
        assert!(idx.retrieve("public void", 5, Bm25Params::default()).is_empty());
    }

    #[test]
    fn ties_go_to_the_lower_id() {
        let idx = build_index(
            &corpus(&[("b c", "1"), ("a b", "2"), ("a b", "3")]),
            AnalyzerConfig::default(),
        )
        .unwrap();
        let hits = idx.retrieve("a b", 3, Bm25Params::default());
        assert_eq!(hits[0].doc, 1);
        assert_eq!(hits[1].doc, 2);
        assert_eq!(hits[0].score, hits[1].score);
        assert_eq!(hits[2].doc, 0);
        assert!(idx.retrieve("zzz", 3, Bm25Params::default()).is_empty());
        assert_eq!(idx.retrieve("a b", 1, Bm25Params::default()).len(), 1);
    }

    #[test]
    fn params_are_validated() {
        assert!(Bm25Params::new(-0.1, 0.5).is_err());
        assert!(Bm25Params::new(1.0, 1.5).is_err());
        assert!(Bm25Params::new(f64::NAN, 0.5).is_err());
        assert!(Bm25Params::new(0.0, 0.0).is_ok());
        assert!(build_index(&corpus(&[]), AnalyzerConfig::default()).is_err());
    }

    fn docs_strategy() -> impl Strategy<Value = Vec<Vec<String>>> {
        proptest::collection::vec(proptest::collection::vec("[a-e]", 1..6), 1..8)
    }

    proptest! {
        #[test]
        fn retrieve_agrees_with_score_doc(docs in docs_strategy(), q in proptest::collection::vec("[a-g]", 1..5)) {
            let pairs: Vec<(String, String)> = docs.iter().map(|d| (d.join(" "), "c".to_string())).collect();
            let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let idx = build_index(&corpus(&refs), AnalyzerConfig::default()).unwrap();
            let params = Bm25Params::default();
            let hits = idx.retrieve_terms(&q, usize::MAX, params);
            for h in &hits {
                prop_assert_eq!(h.score, idx.score_doc(&q, h.doc, params).unwrap());
                prop_assert!(h.score > 0.0);
            }
            for w in hits.windows(2) {
                prop_assert!(w[0].score > w[1].score || (w[0].score == w[1].score && w[0].doc < w[1].doc));
            }
            for doc in 0..idx.n_docs() {
                if !hits.iter().any(|h| h.doc == doc) {
                    prop_assert_eq!(idx.score_doc(&q, doc, params).unwrap(), 0.0);
                }
            }
        }

        #[test]
        fn more_occurrences_never_lower_a_score(base in proptest::collection::vec("[a-c]", 1..6), extra in 1usize..4) {
            // Same document length, more copies of the query term.
            let params = Bm25Params::default();
            let mut boosted = base.clone();
            for slot in boosted.iter_mut().take(extra) {
                *slot = "a".to_string();
            }
            let before = build_index(&corpus(&[(&base.join(" "), "x"), ("b c", "y")]), AnalyzerConfig::default()).unwrap();
            let after = build_index(&corpus(&[(&boosted.join(" "), "x"), ("b c", "y")]), AnalyzerConfig::default()).unwrap();
            let q = vec!["a".to_string()];
            prop_assert!(after.score_doc(&q, 0, params).unwrap() >= before.score_doc(&q, 0, params).unwrap());
        }
    }
}
