use std::collections::{HashMap, HashSet};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::zipf::zipf_table;
use crate::error::{Error, Result};
use crate::metrics::{order_free_mean, pair_bleu, BleuVariant};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AblationPoint {
    pub k: usize,
    pub bleu: f64,
}

/// Mean BLEU-M2 of each target against itself after the `k` most frequent
/// n-grams have been overwritten, for k = 0..=k_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationCurve {
    pub n: usize,
    pub points: Vec<AblationPoint>,
    pub seed: u64,
}

/// Placeholder prefix that no vocabulary token starts with. The seed only
/// decides which prefix is tried first.
fn placeholder_prefix(vocab: &HashSet<&str>, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let prefix = format!("⟨rnd{:08x}", rng.next_u32());
        if !vocab.iter().any(|t| t.starts_with(&prefix)) {
            return prefix;
        }
    }
}

/// Replaces every occurrence of the top-k n-grams with unique placeholders
/// (one per replaced token, so lengths are preserved) and scores the result
/// against the untouched target.
pub fn ablation_curve<S>(targets: &[S], n: usize, k_max: usize, seed: u64) -> Result<AblationCurve>
where
    S: AsRef<[String]> + Sync,
{
    if targets.is_empty() {
        return Err(Error::EmptyInput("targets"));
    }
    if n != 1 && n != 3 {
        return Err(Error::InvalidParameter(format!(
            "ablation n-gram order must be 1 or 3, got {n}"
        )));
    }
    let table = zipf_table(targets.iter(), n)?;
    let rank: HashMap<&[String], usize> = table
        .rows
        .iter()
        .take(k_max)
        .enumerate()
        .map(|(i, r)| (r.ngram.as_slice(), i))
        .collect();

    // For each token position, the best rank of any n-gram window covering
    // it. A position is overwritten at step k iff that rank is below k.
    let cover: Vec<Vec<usize>> = targets
        .iter()
        .map(|t| {
            let toks = t.as_ref();
            let mut best = vec![usize::MAX; toks.len()];
            if toks.len() >= n {
                for (start, w) in toks.windows(n).enumerate() {
                    if let Some(&r) = rank.get(w) {
                        for slot in &mut best[start..start + n] {
                            *slot = (*slot).min(r);
                        }
                    }
                }
            }
            best
        })
        .collect();

    let vocab: HashSet<&str> = targets
        .iter()
        .flat_map(|t| t.as_ref().iter().map(String::as_str))
        .collect();
    let prefix = placeholder_prefix(&vocab, seed);

    let mut points = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let scores: Vec<f64> = targets
            .par_iter()
            .zip(cover.par_iter())
            .enumerate()
            .map(|(doc, (t, best))| {
                let original = t.as_ref();
                let perturbed: Vec<String> = original
                    .iter()
                    .zip(best)
                    .enumerate()
                    .map(|(pos, (tok, &r))| {
                        if r < k {
                            format!("{prefix}-{k}-{doc}-{pos}⟩")
                        } else {
                            tok.clone()
                        }
                    })
                    .collect();
                pair_bleu(&perturbed, &[original], BleuVariant::M2).map(|b| b.score)
            })
            .collect::<Result<_>>()?;
        points.push(AblationPoint {
            k,
            bleu: order_free_mean(&scores),
        });
    }
    Ok(AblationCurve { n, points, seed })
}
