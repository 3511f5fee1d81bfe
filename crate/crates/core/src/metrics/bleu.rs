use serde::{Deserialize, Serialize};

use super::ngram::{modified_precision, PrecisionFraction};
use super::variant::{Aggregation, BleuVariant, Smoothing};
use crate::error::{Error, Result};

/// Highest n-gram order combined into the score.
pub const MAX_ORDER: usize = 4;

/// Per-order precisions, brevity penalty and the final 0–100 score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuBreakdown {
    /// Raw clipped counts for n = 1..=4.
    pub precisions: Vec<PrecisionFraction>,
    /// Precisions after the variant's smoothing.
    pub smoothed_p: Vec<f64>,
    pub bp: f64,
    pub cand_len: u64,
    pub ref_len: u64,
    pub score: f64,
}

/// One candidate with its references.
#[derive(Debug, Clone, Copy)]
pub struct ScoredPair<'a, R: AsRef<[String]> = &'a [String]> {
    pub candidate: &'a [String],
    pub references: &'a [R],
}

impl<'a, R: AsRef<[String]>> ScoredPair<'a, R> {
    pub fn new(candidate: &'a [String], references: &'a [R]) -> Self {
        Self { candidate, references }
    }
}

/// Sufficient statistics for BLEU: clipped matches and candidate totals per
/// order plus lengths. Corpus scores add these up across pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BleuCounts {
    pub matches: [u64; MAX_ORDER],
    pub totals: [u64; MAX_ORDER],
    pub cand_len: u64,
    pub ref_len: u64,
}

impl BleuCounts {
    pub fn of_pair<R: AsRef<[String]>>(cand: &[String], refs: &[R]) -> Result<Self> {
        if refs.is_empty() {
            return Err(Error::NoReferences);
        }
        let mut counts = BleuCounts {
            cand_len: cand.len() as u64,
            ref_len: closest_ref_len(cand.len(), refs) as u64,
            ..Default::default()
        };
        for n in 1..=MAX_ORDER {
            let p = modified_precision(cand, refs, n)?;
            counts.matches[n - 1] = p.matches;
            counts.totals[n - 1] = p.total;
        }
        Ok(counts)
    }

    pub fn add(&mut self, other: &BleuCounts) {
        for n in 0..MAX_ORDER {
            self.matches[n] += other.matches[n];
            self.totals[n] += other.totals[n];
        }
        self.cand_len += other.cand_len;
        self.ref_len += other.ref_len;
    }

    /// Combines the counts under `smoothing`.
    pub fn finish(&self, smoothing: Smoothing) -> BleuBreakdown {
        let precisions: Vec<PrecisionFraction> = (0..MAX_ORDER)
            .map(|i| PrecisionFraction {
                order: i + 1,
                matches: self.matches[i],
                total: self.totals[i],
            })
            .collect();
        let smoothed_p = smooth(&precisions, smoothing, self.cand_len);
        let bp = brevity_penalty(self.cand_len, self.ref_len);
        let score = if self.cand_len == 0 || smoothed_p.iter().any(|&p| p <= 0.0) {
            0.0
        } else {
            let log_mean = smoothed_p.iter().map(|p| p.ln()).sum::<f64>() / MAX_ORDER as f64;
            100.0 * bp * log_mean.exp()
        };
        BleuBreakdown {
            precisions,
            smoothed_p,
            bp,
            cand_len: self.cand_len,
            ref_len: self.ref_len,
            score,
        }
    }
}

fn smooth(precisions: &[PrecisionFraction], smoothing: Smoothing, cand_len: u64) -> Vec<f64> {
    let mut zero_orders = 0;
    precisions
        .iter()
        .map(|p| {
            // Orders longer than the candidate count as 0 matches out of 1.
            let (m, c) = if p.total == 0 {
                (0.0, 1.0)
            } else {
                (p.matches as f64, p.total as f64)
            };
            let n = p.order;
            match smoothing {
                Smoothing::None => m / c,
                Smoothing::AddOne { from_order } if n >= from_order => (m + 1.0) / (c + 1.0),
                Smoothing::AddOne { .. } => m / c,
                Smoothing::LengthFallback if m == 0.0 => {
                    if cand_len <= 1 {
                        0.0
                    } else {
                        1.0 / ((n - 1) as f64 + 5.0 / (cand_len as f64).ln())
                    }
                }
                Smoothing::LengthFallback => m / c,
                Smoothing::Exponential if m == 0.0 => {
                    zero_orders += 1;
                    1.0 / (2f64.powi(zero_orders) * c)
                }
                Smoothing::Exponential => m / c,
            }
        })
        .collect()
}

/// The reference length closest to `cand_len`; ties go to the shorter one.
fn closest_ref_len<R: AsRef<[String]>>(cand_len: usize, refs: &[R]) -> usize {
    refs.iter()
        .map(|r| r.as_ref().len())
        .min_by_key(|&len| (len.abs_diff(cand_len), len))
        .unwrap_or(0)
}

/// `1` when the candidate is longer than the reference, `exp(1 - r/c)`
/// otherwise, and `0` for an empty candidate.
pub fn brevity_penalty(cand_len: u64, ref_len: u64) -> f64 {
    if cand_len == 0 {
        0.0
    } else if cand_len > ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    }
}

fn expect(variant: BleuVariant, expected: Aggregation) -> Result<()> {
    if variant.aggregation() != expected {
        return Err(Error::AggregationMismatch {
            variant: variant.name(),
            actual: variant.aggregation().as_str(),
            expected: expected.as_str(),
        });
    }
    Ok(())
}

/// Single-pair BLEU for a sentence-aggregated variant.
pub fn sentence_bleu<R: AsRef<[String]>>(cand: &[String], refs: &[R], variant: BleuVariant) -> Result<BleuBreakdown> {
    expect(variant, Aggregation::Sentence)?;
    pair_bleu(cand, refs, variant)
}

/// Single-pair BLEU under any variant's smoothing. For corpus variants this
/// equals the corpus score of a one-pair set.
pub fn pair_bleu<R: AsRef<[String]>>(cand: &[String], refs: &[R], variant: BleuVariant) -> Result<BleuBreakdown> {
    Ok(BleuCounts::of_pair(cand, refs)?.finish(variant.smoothing()))
}

/// Corpus BLEU: counts and lengths are summed over all pairs before smoothing.
pub fn corpus_bleu<R: AsRef<[String]>>(pairs: &[ScoredPair<'_, R>], variant: BleuVariant) -> Result<BleuBreakdown> {
    expect(variant, Aggregation::Corpus)?;
    corpus_counts(pairs).map(|c| c.finish(variant.smoothing()))
}

pub(crate) fn corpus_counts<R: AsRef<[String]>>(pairs: &[ScoredPair<'_, R>]) -> Result<BleuCounts> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput("pair list"));
    }
    let mut total = BleuCounts::default();
    for p in pairs {
        total.add(&BleuCounts::of_pair(p.candidate, p.references)?);
    }
    Ok(total)
}
