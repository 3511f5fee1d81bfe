use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiset of n-grams, keyed by token window.
pub type NgramCounts<'a> = HashMap<&'a [String], usize>;

/// All contiguous windows of length `n`, with multiplicity.
pub fn ngrams(tokens: &[String], n: usize) -> Result<NgramCounts<'_>> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    let mut counts = NgramCounts::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_default() += 1;
        }
    }
    Ok(counts)
}

/// Clipped overlap `matches` over candidate n-gram count `total` for one order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionFraction {
    pub order: usize,
    pub matches: u64,
    pub total: u64,
}

impl PrecisionFraction {
    pub fn value(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.matches as f64 / self.total as f64
        }
    }
}

/// Each candidate n-gram is credited at most as many times as it occurs in
/// the reference that contains it most often.
pub fn modified_precision<R: AsRef<[String]>>(cand: &[String], refs: &[R], n: usize) -> Result<PrecisionFraction> {
    if refs.is_empty() {
        return Err(Error::NoReferences);
    }
    let cand_counts = ngrams(cand, n)?;
    let mut max_ref: NgramCounts = HashMap::new();
    for r in refs {
        for (g, c) in ngrams(r.as_ref(), n)? {
            let slot = max_ref.entry(g).or_default();
            *slot = (*slot).max(c);
        }
    }
    let matches = cand_counts
        .iter()
        .map(|(g, &c)| c.min(max_ref.get(g).copied().unwrap_or(0)))
        .sum::<usize>();
    Ok(PrecisionFraction {
        order: n,
        matches: matches as u64,
        total: cand.len().saturating_sub(n - 1) as u64,
    })
}
