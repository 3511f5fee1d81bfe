use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::spearman;
use crate::corpus::ParallelCorpus;
use crate::error::{Error, Result};
use crate::metrics::{pair_bleu, BleuVariant};

/// Default similarity floor on the 0–1 scale.
pub const DEFAULT_EPSILON: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimPair {
    /// Index of the example used as reference.
    pub first: usize,
    pub second: usize,
    /// BLEU-M2 between the two sources, 0–100.
    pub in_sim: f64,
    /// BLEU-M2 between the two targets, 0–100.
    pub out_sim: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivariateSample {
    pub pairs: Vec<SimPair>,
    pub count_requested: usize,
    /// Compared against similarities rescaled to 0–1.
    pub epsilon: f64,
    pub seed: u64,
}

impl BivariateSample {
    /// Pairs whose input and output similarity both exceed epsilon.
    pub fn surviving(&self) -> impl Iterator<Item = &SimPair> {
        let eps = self.epsilon;
        self.pairs
            .iter()
            .filter(move |p| p.in_sim / 100.0 > eps && p.out_sim / 100.0 > eps)
    }
}

/// Draws `count` random pairs of distinct examples (with replacement across
/// pairs) and measures input and output similarity of each.
pub fn sample_bivariate(corpus: &ParallelCorpus, count: usize, seed: u64, epsilon: f64) -> Result<BivariateSample> {
    let n = corpus.len();
    if n < 2 {
        return Err(Error::TooFew { needed: 2, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(usize, usize)> = (0..count)
        .map(|_| {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();

    let ex = corpus.examples();
    let pairs = draws
        .par_iter()
        .map(|&(a, b)| {
            let in_sim = pair_bleu(&ex[b].source, &[&ex[a].source], BleuVariant::M2)?.score;
            let out_sim = pair_bleu(&ex[b].target, &[&ex[a].target], BleuVariant::M2)?.score;
            Ok(SimPair {
                first: a,
                second: b,
                in_sim,
                out_sim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BivariateSample {
        pairs,
        count_requested: count,
        epsilon,
        seed,
    })
}

/// Spearman correlation between input and output similarity, over all pairs
/// and over the pairs above epsilon. `None` marks an undefined correlation
/// (fewer than 3 pairs or constant ranks).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub rho_nonzero: Option<f64>,
    pub p_nonzero: Option<f64>,
    pub rho_all: Option<f64>,
    pub p_all: Option<f64>,
    pub n_nonzero: usize,
    pub n_all: usize,
}

fn correlate<'a>(pairs: impl Iterator<Item = &'a SimPair>) -> Result<(Option<f64>, Option<f64>, usize)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.map(|p| (p.in_sim, p.out_sim)).unzip();
    let n = xs.len();
    if n < 3 {
        return Ok((None, None, n));
    }
    Ok(match spearman(&xs, &ys)? {
        Some(s) => (Some(s.rho), Some(s.p), n),
        None => (None, None, n),
    })
}

pub fn dependence_report(sample: &BivariateSample) -> Result<CorrelationResult> {
    if sample.pairs.is_empty() {
        return Err(Error::EmptyInput("bivariate sample"));
    }
    let (rho_all, p_all, n_all) = correlate(sample.pairs.iter())?;
    let (rho_nonzero, p_nonzero, n_nonzero) = correlate(sample.surviving())?;
    Ok(CorrelationResult {
        rho_nonzero,
        p_nonzero,
        rho_all,
        p_all,
        n_nonzero,
        n_all,
    })
}
