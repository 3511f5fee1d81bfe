use std::collections::HashSet;

use serde::Serialize;

use super::{ParallelCorpus, TokenSequence};

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LengthSummary {
    pub mean: f64,
    pub min: usize,
    pub p50: usize,
    pub p90: usize,
    pub p99: usize,
    pub max: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SideStats {
    pub tokens: usize,
    pub vocab: usize,
    pub lengths: LengthSummary,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CorpusStats {
    pub examples: usize,
    pub source: SideStats,
    pub target: SideStats,
}

/// Nearest-rank percentile over ascending `sorted`; 0 for an empty slice.
pub(crate) fn nearest_rank(sorted: &[usize], pct: f64) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn side<'a>(seqs: impl Iterator<Item = &'a TokenSequence>) -> SideStats {
    let mut vocab: HashSet<&str> = HashSet::new();
    let mut lengths = Vec::new();
    for seq in seqs {
        lengths.push(seq.len());
        vocab.extend(seq.iter().map(String::as_str));
    }
    lengths.sort_unstable();
    let tokens: usize = lengths.iter().sum();
    let mean = if lengths.is_empty() {
        0.0
    } else {
        tokens as f64 / lengths.len() as f64
    };
    SideStats {
        tokens,
        vocab: vocab.len(),
        lengths: LengthSummary {
            mean,
            min: lengths.first().copied().unwrap_or(0),
            p50: nearest_rank(&lengths, 50.0),
            p90: nearest_rank(&lengths, 90.0),
            p99: nearest_rank(&lengths, 99.0),
            max: lengths.last().copied().unwrap_or(0),
        },
    }
}

pub fn corpus_stats(corpus: &ParallelCorpus) -> CorpusStats {
    CorpusStats {
        examples: corpus.len(),
        source: side(corpus.sources()),
        target: side(corpus.targets()),
    }
}
