//! Brute-force BLEU written from the formulas alone, plus fixture helpers.
#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

/// Every window of length n, as owned vectors, in order.
fn windows(s: &[String], n: usize) -> Vec<Vec<String>> {
    if s.len() < n {
        return Vec::new();
    }
    (0..=s.len() - n).map(|i| s[i..i + n].to_vec()).collect()
}

/// (clipped matches, candidate n-gram count) by linear scans.
pub fn clipped(cand: &[String], reference: &[String], n: usize) -> (u64, u64) {
    let cw = windows(cand, n);
    let rw = windows(reference, n);
    let mut seen: Vec<&Vec<String>> = Vec::new();
    let mut matches = 0;
    for g in &cw {
        if seen.contains(&g) {
            continue;
        }
        seen.push(g);
        let in_cand = cw.iter().filter(|x| *x == g).count();
        let in_ref = rw.iter().filter(|x| *x == g).count();
        matches += in_cand.min(in_ref) as u64;
    }
    (matches, cw.len() as u64)
}

#[derive(Clone, Copy, PartialEq)]
enum Rule {
    Raw,
    LaplaceFrom2,
    LaplaceAll,
    Method4,
    Halving,
}

fn rule(variant: &str) -> (Rule, bool) {
    match variant {
        "CN" | "M2" => (Rule::LaplaceFrom2, false),
        "NCS" => (Rule::LaplaceAll, false),
        "DC" => (Rule::Method4, false),
        "FC" | "Moses" => (Rule::Raw, true),
        "Sacre" => (Rule::Halving, true),
        other => panic!("unknown variant {other}"),
    }
}

fn combine(m: [u64; 4], c: [u64; 4], cand_len: u64, ref_len: u64, rule: Rule) -> f64 {
    let mut logs = 0.0;
    let mut halvings = 0;
    for i in 0..4 {
        let order = (i + 1) as f64;
        let (mi, ci) = if c[i] == 0 {
            (0.0, 1.0)
        } else {
            (m[i] as f64, c[i] as f64)
        };
        let p = match rule {
            Rule::LaplaceAll => (mi + 1.0) / (ci + 1.0),
            Rule::LaplaceFrom2 if i >= 1 => (mi + 1.0) / (ci + 1.0),
            Rule::Method4 if mi == 0.0 => {
                if cand_len < 2 {
                    0.0
                } else {
                    1.0 / (order - 1.0 + 5.0 / (cand_len as f64).ln())
                }
            }
            Rule::Halving if mi == 0.0 => {
                halvings += 1;
                1.0 / (2f64.powi(halvings) * ci)
            }
            _ => mi / ci,
        };
        if p <= 0.0 {
            return 0.0;
        }
        logs += p.ln();
    }
    if cand_len == 0 {
        return 0.0;
    }
    let bp = if cand_len > ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    };
    100.0 * bp * (logs / 4.0).exp()
}

fn counts(cand: &[String], reference: &[String]) -> ([u64; 4], [u64; 4]) {
    let mut m = [0; 4];
    let mut c = [0; 4];
    for n in 1..=4 {
        let (a, b) = clipped(cand, reference, n);
        m[n - 1] = a;
        c[n - 1] = b;
    }
    (m, c)
}

/// One pair scored under `variant`'s smoothing (a one-pair corpus for corpus
/// variants).
pub fn oracle_pair(cand: &[String], reference: &[String], variant: &str) -> f64 {
    let (m, c) = counts(cand, reference);
    combine(m, c, cand.len() as u64, reference.len() as u64, rule(variant).0)
}

/// Sentence variants: arithmetic mean of pair scores. Corpus variants:
/// summed counts and lengths.
pub fn oracle_set(pairs: &[(Vec<String>, Vec<String>)], variant: &str) -> f64 {
    let (r, corpus) = rule(variant);
    if !corpus {
        return pairs.iter().map(|(c, rf)| oracle_pair(c, rf, variant)).sum::<f64>() / pairs.len() as f64;
    }
    let mut m = [0; 4];
    let mut c = [0; 4];
    let (mut cl, mut rl) = (0, 0);
    for (cand, rf) in pairs {
        let (pm, pc) = counts(cand, rf);
        for i in 0..4 {
            m[i] += pm[i];
            c[i] += pc[i];
        }
        cl += cand.len() as u64;
        rl += rf.len() as u64;
    }
    combine(m, c, cl, rl, r)
}

pub fn read_lines(rel: &str) -> Vec<Vec<String>> {
    std::fs::read_to_string(fixture(rel))
        .unwrap()
        .lines()
        .map(toks)
        .collect()
}

pub fn conformance_pairs() -> Vec<(Vec<String>, Vec<String>)> {
    read_lines("conformance/cand.txt")
        .into_iter()
        .zip(read_lines("conformance/ref.txt"))
        .collect()
}
