use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZipfRow {
    pub ngram: Vec<String>,
    pub count: usize,
    pub rel_freq: f64,
}

/// Rank-frequency table of n-grams, most frequent first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZipfTable {
    pub n: usize,
    pub rows: Vec<ZipfRow>,
    pub total_ngrams: usize,
}

/// Counts every n-gram across `side`. Ties in count are broken by comparing
/// the n-grams token by token.
pub fn zipf_table<'a, I, S>(side: I, n: usize) -> Result<ZipfTable>
where
    I: IntoIterator<Item = &'a S>,
    S: AsRef<[String]> + ?Sized + 'a,
{
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    let mut counts: HashMap<&'a [String], usize> = HashMap::new();
    let mut total = 0usize;
    for seq in side {
        let tokens = seq.as_ref();
        if tokens.len() >= n {
            for w in tokens.windows(n) {
                *counts.entry(w).or_default() += 1;
                total += 1;
            }
        }
    }
    let mut ranked: Vec<(&[String], usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let rows = ranked
        .into_iter()
        .map(|(g, count)| ZipfRow {
            ngram: g.to_vec(),
            count,
            rel_freq: count as f64 / total as f64,
        })
        .collect();
    Ok(ZipfTable {
        n,
        rows,
        total_ngrams: total,
    })
}

/// Least-squares slope of ln(relative frequency) against ln(rank) over the
/// first `head` rows. Zipf-like text gives a negative slope; more repetitive
/// text gives a steeper one.
pub fn zipf_slope(table: &ZipfTable, head: usize) -> Result<f64> {
    let needed = head.max(2);
    if table.rows.len() < needed {
        return Err(Error::TooFew {
            needed,
            got: table.rows.len(),
        });
    }
    let pts: Vec<(f64, f64)> = table.rows[..needed]
        .iter()
        .enumerate()
        .map(|(i, r)| (((i + 1) as f64).ln(), r.rel_freq.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
