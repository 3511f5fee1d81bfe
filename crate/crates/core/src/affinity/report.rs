use rayon::prelude::*;
use serde::Serialize;

use super::extract::MethodRecord;
use super::sample::{AffinityGroupKind, PairSample};
use crate::corpus::TokenSequence;
use crate::error::{Error, Result};
use crate::metrics::{pair_bleu, score_set, ser_round2, BleuVariant, ScoredPair};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSummary {
    pub variant: BleuVariant,
    /// Mean of pair scores, or the corpus score for corpus variants.
    #[serde(serialize_with = "ser_round2")]
    pub mean: f64,
    #[serde(serialize_with = "ser_round2")]
    pub q1: f64,
    #[serde(serialize_with = "ser_round2")]
    pub median: f64,
    #[serde(serialize_with = "ser_round2")]
    pub q3: f64,
    /// Per-pair sentence scores in sample order.
    #[serde(skip)]
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffinityReport {
    pub kind: AffinityGroupKind,
    pub n_pairs: usize,
    pub seed: u64,
    pub variants: Vec<VariantSummary>,
}

impl AffinityReport {
    pub fn summary(&self, variant: BleuVariant) -> Option<&VariantSummary> {
        self.variants.iter().find(|v| v.variant == variant)
    }

    /// Largest minus smallest mean across the reported variants.
    pub fn variant_spread(&self) -> f64 {
        let means = self.variants.iter().map(|v| v.mean);
        let max = means.clone().fold(f64::NEG_INFINITY, f64::max);
        let min = means.fold(f64::INFINITY, f64::min);
        max - min
    }
}

/// Quantile with linear interpolation between closest ranks.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Scores every pair under each variant; the first record of a pair is the
/// reference.
pub fn affinity_report(
    records: &[MethodRecord],
    sample: &PairSample,
    variants: &[BleuVariant],
) -> Result<AffinityReport> {
    if sample.pairs.is_empty() {
        return Err(Error::EmptyInput("pair sample"));
    }
    if let Some(&(a, b)) = sample
        .pairs
        .iter()
        .find(|&&(a, b)| a >= records.len() || b >= records.len())
    {
        return Err(Error::InvalidParameter(format!("pair ({a}, {b}) is out of range")));
    }
    let refs: Vec<&[TokenSequence]> = sample
        .pairs
        .iter()
        .map(|&(a, _)| std::slice::from_ref(&records[a].comment))
        .collect();
    let pairs: Vec<ScoredPair<'_, TokenSequence>> = sample
        .pairs
        .iter()
        .zip(&refs)
        .map(|(&(_, b), r)| ScoredPair::new(records[b].comment.tokens(), r))
        .collect();

    let mut out = Vec::with_capacity(variants.len());
    for &variant in variants {
        let scores: Vec<f64> = pairs
            .par_iter()
            .map(|p| pair_bleu(p.candidate, p.references, variant).map(|b| b.score))
            .collect::<Result<_>>()?;
        let mean = score_set(&pairs, variant)?.score;
        let mut sorted = scores.clone();
        sorted.sort_by(f64::total_cmp);
        out.push(VariantSummary {
            variant,
            mean,
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
            scores,
        });
    }
    Ok(AffinityReport {
        kind: sample.kind,
        n_pairs: sample.pairs.len(),
        seed: sample.seed,
        variants: out,
    })
}
