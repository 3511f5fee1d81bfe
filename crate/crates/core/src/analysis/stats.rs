use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Permutation count above which exact enumeration gives way to sampling.
const EXACT_PERMUTATION_LIMIT: usize = 100_000;
const MONTE_CARLO_ROUNDS: usize = 100_000;
const MONTE_CARLO_SEED: u64 = 0x5eed_5bea_4a11;
/// Below this size the p-value is permutation based.
const PERMUTATION_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spearman {
    pub rho: f64,
    /// Two-sided.
    pub p: f64,
}

/// Ranks starting at 1; tied values share their average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rank correlation with a two-sided p-value.
///
/// Returns `Ok(None)` when either input is constant. For fewer than 10 points
/// the p-value comes from the permutation distribution (exhaustive up to
/// 100k orderings, seeded sampling beyond); otherwise from the t approximation
/// with n − 2 degrees of freedom.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<Option<Spearman>> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 3 {
        return Err(Error::TooFew {
            needed: 3,
            got: xs.len(),
        });
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let Some(rho) = pearson(&rx, &ry) else {
        return Ok(None);
    };
    let n = xs.len();
    let p = if n < PERMUTATION_MAX_N {
        permutation_p(&rx, &ry, rho)
    } else {
        t_approx_p(rho, n)
    };
    Ok(Some(Spearman { rho, p }))
}

fn t_approx_p(rho: f64, n: usize) -> f64 {
    if rho.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = rho * (df / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

fn permutation_p(rx: &[f64], ry: &[f64], rho: f64) -> f64 {
    let n = rx.len();
    let threshold = rho.abs() - 1e-12;
    let extreme = |perm: &[f64]| pearson(rx, perm).is_some_and(|r| r.abs() >= threshold);
    let total: usize = (1..=n).product();
    if total <= EXACT_PERMUTATION_LIMIT {
        let mut perm = ry.to_vec();
        let mut hits = 0usize;
        heap_permutations(&mut perm, &mut |p| {
            if extreme(p) {
                hits += 1;
            }
        });
        hits as f64 / total as f64
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(MONTE_CARLO_SEED);
        let mut perm = ry.to_vec();
        let mut hits = 0usize;
        for _ in 0..MONTE_CARLO_ROUNDS {
            perm.shuffle(&mut rng);
            if extreme(&perm) {
                hits += 1;
            }
        }
        (hits + 1) as f64 / (MONTE_CARLO_ROUNDS + 1) as f64
    }
}

/// Visits every ordering of `items` (Heap's algorithm, iterative).
fn heap_permutations(items: &mut [f64], visit: &mut impl FnMut(&[f64])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Benjamini-Hochberg step-up adjustment, returned in input order.
pub fn bh_adjust(pvals: &[f64]) -> Result<Vec<f64>> {
    if let Some(&bad) = pvals.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidPValue(bad));
    }
    let m = pvals.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvals[a].total_cmp(&pvals[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for (pos, &idx) in order.iter().enumerate().rev() {
        let rank = pos + 1;
        running = running.min(pvals[idx] * m as f64 / rank as f64);
        // Exact arithmetic gives adjusted >= p; rounding in p*m/rank may not.
        adjusted[idx] = running.min(1.0).max(pvals[idx]);
    }
    Ok(adjusted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Textbook formula for untied data: 1 - 6 Σd² / (n (n² - 1)).
    fn rho_no_ties(rx: &[f64], ry: &[f64]) -> f64 {
        let n = rx.len() as f64;
        let d2: f64 = rx.iter().zip(ry).map(|(a, b)| (a - b) * (a - b)).sum();
        1.0 - 6.0 * d2 / (n * (n * n - 1.0))
    }

    #[test]
    fn five_point_fixture() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = [2.0, 1.0, 4.0, 3.0, 5.0];
        // Σd² = 4, so rho = 1 - 24/120.
        let oracle = rho_no_ties(&xs, &ys);
        assert!((oracle - 0.8).abs() < 1e-12);
        let s = spearman(&xs, &ys).unwrap().unwrap();
        assert!((s.rho - oracle).abs() < 1e-12);
        // 120 orderings; rho >= 0.8 needs Σd² <= 4: the identity, 4 adjacent
        // swaps and 3 pairs of disjoint adjacent swaps. Mirrored for rho <= -0.8.
        let mut hits = 0;
        let mut perm = ys.to_vec();
        heap_permutations(&mut perm, &mut |p| {
            if rho_no_ties(&xs, p).abs() >= 0.8 - 1e-12 {
                hits += 1;
            }
        });
        assert_eq!(hits, 16);
        assert!((s.p - hits as f64 / 120.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_and_reversed() {
        let xs: Vec<f64> = (0..20).map(f64::from).collect();
        let up: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let down: Vec<f64> = xs.iter().map(|x| -x.exp()).collect();
        let s = spearman(&xs, &up).unwrap().unwrap();
        assert_eq!(s.rho, 1.0);
        assert_eq!(s.p, 0.0);
        assert_eq!(spearman(&xs, &down).unwrap().unwrap().rho, -1.0);
    }

    #[test]
    fn undefined_and_errors() {
        assert_eq!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).unwrap(), None);
        assert!(matches!(spearman(&[1.0, 2.0], &[1.0, 2.0]), Err(Error::TooFew { .. })));
        assert!(matches!(
            spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch(3, 2))
        ));
    }

    #[test]
    fn ties_get_average_ranks() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 30.0]), [1.5, 3.0, 1.5, 4.0]);
    }

    #[test]
    fn t_approximation_matches_reference_value() {
        // rho = 0.5, n = 12: t = 0.5 * sqrt(10 / 0.75) = 1.825742; two-sided
        // p for 10 df is 0.0979 (standard t tables).
        let p = t_approx_p(0.5, 12);
        assert!((p - 0.0979).abs() < 5e-4, "{p}");
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let xs: Vec<f64> = (0..9).map(f64::from).collect();
        let ys = [3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.0, 6.0, 5.5];
        let a = spearman(&xs, &ys).unwrap().unwrap();
        let b = spearman(&xs, &ys).unwrap().unwrap();
        assert_eq!(a, b);
        assert!(a.p > 0.0 && a.p <= 1.0);
    }

    #[test]
    fn bh_fixtures() {
        assert_eq!(bh_adjust(&[0.01]).unwrap(), [0.01]);
        // Sorted 0.01, 0.03, 0.04 -> raw 0.03, 0.045, 0.04; the step-up
        // minimum pulls 0.045 down to 0.04.
        let adj = bh_adjust(&[0.01, 0.04, 0.03]).unwrap();
        let expect = [0.03, 0.04, 0.04];
        for (a, e) in adj.iter().zip(expect) {
            assert!((a - e).abs() < 1e-15);
        }
        assert_eq!(bh_adjust(&[1.0, 1.0, 1.0]).unwrap(), [1.0, 1.0, 1.0]);
        assert!(bh_adjust(&[0.5, 1.2]).is_err());
        assert!(bh_adjust(&[f64::NAN]).is_err());
        assert!(bh_adjust(&[]).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn bh_properties(ps in proptest::collection::vec(0.0f64..=1.0, 1..30)) {
            let adj = bh_adjust(&ps).unwrap();
            let mut idx: Vec<usize> = (0..ps.len()).collect();
            idx.sort_by(|&a, &b| ps[a].total_cmp(&ps[b]));
            for w in idx.windows(2) {
                prop_assert!(adj[w[0]] <= adj[w[1]]);
            }
            for (a, p) in adj.iter().zip(&ps) {
                prop_assert!(*a >= *p && *a <= 1.0);
            }
        }

        #[test]
        fn spearman_is_monotone_invariant(
            xs in proptest::collection::vec(-100.0f64..100.0, 3..40),
            ys in proptest::collection::vec(-100.0f64..100.0, 40),
        ) {
            let ys = &ys[..xs.len()];
            let a = spearman(&xs, ys).unwrap();
            let tx: Vec<f64> = xs.iter().map(|x| x.powi(3) + 7.0).collect();
            let ty: Vec<f64> = ys.iter().map(|y| (y / 50.0).exp()).collect();
            let b = spearman(&tx, &ty).unwrap();
            match (a, b) {
                (Some(a), Some(b)) => {
                    prop_assert!((a.rho - b.rho).abs() < 1e-12);
                    prop_assert!((-1.0..=1.0).contains(&a.rho));
                }
                (None, None) => {}
                _ => prop_assert!(false, "definedness changed"),
            }
        }
    }
}
