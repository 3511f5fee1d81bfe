//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test --test acceptance`.
//!
//! A criterion listed in `KNOWN_RED` still runs at full strength and prints
//! FAIL when it fails; it only does not fail the process.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use commentbench::affinity::{
    affinity_report, check_sample, read_records_jsonl, sample_pairs, AffinityGroupKind, MethodRecord, PairSample,
    SampleOptions,
};
use commentbench::analysis::{ablation_curve, bh_adjust, spearman};
use commentbench::corpus::{
    load_jsonl, tokenize, LoadOptions, ParallelCorpus, ParallelExample, TokenSequence, TokenizerConfig,
};
use commentbench::metrics::{pair_bleu, score_set, BleuVariant, ScoredPair};
use commentbench::retrieval::{build_index, ir_eval, AnalyzerConfig, Bm25Params};
use common::{conformance_pairs, oracle_pair, oracle_set, toks};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose stated target contradicts its own fixture.
const KNOWN_RED: &[(&str, &str)] = &[(
    "statistics-spearman-fixture",
    "ranks (1,2),(2,1),(3,4),(4,3),(5,5) give sum d^2 = 4, so rho = 1 - 24/120 = 0.8, not 0.7",
)];

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(limit_s), || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn score(pairs: &[(Vec<String>, Vec<String>)], v: BleuVariant) -> f64 {
    let refs: Vec<[&Vec<String>; 1]> = pairs.iter().map(|(_, r)| [r]).collect();
    let scored: Vec<_> = pairs
        .iter()
        .zip(&refs)
        .map(|((c, _), r)| ScoredPair::new(c, r))
        .collect();
    score_set(&scored, v).unwrap().score
}

fn tokenization_swing() -> Check {
    let t = Instant::now();
    let m = |cfg: &TokenizerConfig, v: BleuVariant| {
        let c = tokenize("uses function foo()", cfg);
        let r = tokenize("calls function foo()", cfg);
        pair_bleu(&c, &[&r], v).unwrap().score
    };
    let (ws, punct) = (TokenizerConfig::whitespace(), TokenizerConfig::punctuation());
    let m2 = m(&punct, BleuVariant::M2) - m(&ws, BleuVariant::M2);
    let dc = m(&punct, BleuVariant::Dc) - m(&ws, BleuVariant::Dc);
    ensure(m2 > 15.0, || format!("M2 swing {m2:.2} <= 15"))?;
    ensure((dc - 40.0).abs() <= 5.0, || format!("DC swing {dc:.2} outside 40 +- 5"))?;
    within(t.elapsed(), 1)?;
    Ok(format!("M2 swing {m2:.2}, DC swing {dc:.2}"))
}

fn metric_oracle() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2020);
    let sentence = |rng: &mut ChaCha8Rng| -> Vec<String> {
        let len = rng.random_range(1..=20);
        (0..len).map(|_| format!("t{}", rng.random_range(0..10))).collect()
    };
    let random: Vec<(Vec<String>, Vec<String>)> = (0..200).map(|_| (sentence(&mut rng), sentence(&mut rng))).collect();
    let mut worst = 0f64;
    for v in BleuVariant::ALL {
        for (c, r) in &random {
            let got = pair_bleu(c, &[r], v).unwrap().score;
            worst = worst.max((got - oracle_pair(c, r, v.name())).abs());
        }
        worst = worst.max((score(&random, v) - oracle_set(&random, v.name())).abs());
        let fixture = conformance_pairs();
        ensure(fixture.len() == 50, || "conformance fixture is not 50 pairs".into())?;
        worst = worst.max((score(&fixture, v) - oracle_set(&fixture, v.name())).abs());
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    within(t.elapsed(), 10)?;
    Ok(format!(
        "max deviation {worst:e} over 200 random pairs and the 50-pair fixture"
    ))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn metric_identities() -> Check {
    let t = Instant::now();
    let lines = [
        "returns the size of the list",
        "a b c d",
        "sets the value of the given field to zero",
        "x x x x x",
    ];
    for v in BleuVariant::ALL {
        for l in lines {
            let s = toks(l);
            let got = pair_bleu(&s, &[&s], v).unwrap().score;
            ensure(got == 100.0, || format!("{v} self score {got} on {l:?}"))?;
            let empty: Vec<String> = Vec::new();
            let e = pair_bleu(&empty, &[&s], v).unwrap().score;
            ensure(e == 0.0, || format!("{v} empty candidate scored {e}"))?;
        }
    }
    let fixture: Vec<(Vec<String>, Vec<String>)> = conformance_pairs().into_iter().take(6).collect();
    for v in BleuVariant::ALL {
        let base = score(&fixture, v);
        for p in permutations(fixture.len()) {
            let shuffled: Vec<_> = p.iter().map(|&i| fixture[i].clone()).collect();
            let s = score(&shuffled, v);
            ensure(s.to_bits() == base.to_bits(), || {
                format!("{v} changed under permutation {p:?}")
            })?;
        }
    }
    within(t.elapsed(), 5)?;
    Ok("self = 100, empty = 0, 720 permutations bit-identical for all variants".into())
}

fn corpus_rescue() -> Check {
    let pairs: Vec<(Vec<String>, Vec<String>)> = [
        ("returns the size of the list", "returns the size of the list"),
        ("gets a value", "sets the value"),
        ("adds one item now", "removes every item later"),
        ("closes stream", "opens the stream"),
    ]
    .iter()
    .map(|(c, r)| (toks(c), toks(r)))
    .collect();
    let fc = score(&pairs, BleuVariant::Fc);
    let moses = score(&pairs, BleuVariant::Moses);
    ensure(fc > 0.0 && moses > 0.0, || format!("FC {fc}, Moses {moses}"))?;
    for (c, r) in &pairs[1..] {
        let s = pair_bleu(c, &[r], BleuVariant::Fc).unwrap().score;
        ensure(s == 0.0, || format!("unsmoothed pair score {s} for {c:?}"))?;
    }
    Ok(format!("FC {fc:.2}, Moses {moses:.2}, other pairs 0"))
}

fn ablation() -> Check {
    let targets: Vec<TokenSequence> = vec![TokenSequence::from_spaced("returns the value of the field"); 8];
    let curve = ablation_curve(&targets, 1, 6, 17).map_err(|e| e.to_string())?;
    let p = &curve.points;
    ensure(p[0].bleu == 100.0, || format!("k = 0 gives {}", p[0].bleu))?;
    ensure(p.windows(2).all(|w| w[1].bleu <= w[0].bleu + 1e-9), || {
        "curve increases".into()
    })?;
    // k = 1 overwrites both "the": p = 4/6, (1+1)/(5+1), (0+1)/(4+1), (0+1)/(3+1).
    let hand = 100.0 - 100.0 * (4.0f64 / 6.0 * (2.0 / 6.0) * (1.0 / 5.0) * (1.0 / 4.0)).powf(0.25);
    let drop = p[0].bleu - p[1].bleu;
    ensure((drop - hand).abs() <= 0.01, || {
        format!("k = 1 drop {drop:.4}, hand {hand:.4}")
    })?;
    let trigram = ablation_curve(&targets, 3, 4, 17).map_err(|e| e.to_string())?;
    ensure(trigram.points.windows(2).all(|w| w[1].bleu <= w[0].bleu + 1e-9), || {
        "trigram curve increases".into()
    })?;
    Ok(format!("k = 1 drop {drop:.2} (hand {hand:.2})"))
}

fn spearman_fixture() -> Check {
    let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
    let ys = [2.0, 1.0, 4.0, 3.0, 5.0];
    let rho = spearman(&xs, &ys).map_err(|e| e.to_string())?.ok_or("undefined")?.rho;
    ensure((rho - 0.7).abs() <= 1e-9, || format!("rho = {rho}, expected 0.700"))?;
    Ok(format!("rho = {rho}"))
}

fn bh_fixture() -> Check {
    let p = [0.01, 0.04, 0.03, 0.005];
    // Ranked 0.005, 0.01, 0.03, 0.04 -> 0.02, 0.02, 0.04, 0.04 after step-up.
    let hand = [0.02, 0.04, 0.04, 0.02];
    let adj = bh_adjust(&p).map_err(|e| e.to_string())?;
    for (a, h) in adj.iter().zip(hand) {
        ensure((a - h).abs() < 1e-12, || format!("adjusted {adj:?}, hand {hand:?}"))?;
    }
    Ok(format!("{adj:?}"))
}

fn monotone() -> Check {
    for n in [5usize, 12, 50] {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * 1.5).collect();
        let up: Vec<f64> = xs.iter().map(|x| x * x + 1.0).collect();
        let down: Vec<f64> = xs.iter().map(|x| -x.powi(3)).collect();
        let r1 = spearman(&xs, &up).map_err(|e| e.to_string())?.ok_or("undefined")?.rho;
        let r2 = spearman(&xs, &down).map_err(|e| e.to_string())?.ok_or("undefined")?.rho;
        ensure(r1 == 1.0 && r2 == -1.0, || format!("n = {n}: {r1}, {r2}"))?;
    }
    Ok("rho = +1 and -1 at n = 5, 12, 50".into())
}

fn ir_baseline() -> Check {
    let t = Instant::now();
    let common_terms = [
        "int", "void", "return", "value", "list", "size", "get", "set", "this", "new",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let examples: Vec<ParallelExample> = (0..1000)
        .map(|i| {
            let mut picked: Vec<&str> = Vec::new();
            while picked.len() < 3 {
                let w = common_terms[rng.random_range(0..common_terms.len())];
                if !picked.contains(&w) {
                    picked.push(w);
                }
            }
            let src = format!("{} rare{i} {} {}", picked[0], picked[1], picked[2]);
            ParallelExample {
                id: format!("e{i}"),
                source: TokenSequence::from_spaced(&src),
                target: TokenSequence::from_spaced(&format!("computes the result for case {i} quickly")),
                meta: None,
            }
        })
        .collect();
    let sources: HashSet<String> = examples.iter().map(|e| e.source.joined()).collect();
    ensure(sources.len() == 1000, || "sources are not unique".into())?;
    let corpus = ParallelCorpus::new(examples);
    let analyzer = AnalyzerConfig::new(TokenizerConfig::passthrough());
    let index = build_index(&corpus, analyzer.clone()).map_err(|e| e.to_string())?;
    for v in BleuVariant::ALL {
        let r = ir_eval(&index, &corpus, v, Bm25Params::default()).map_err(|e| e.to_string())?;
        ensure(r.rounded_score() == 100.0, || {
            format!("{v} self-retrieval {}", r.rounded_score())
        })?;
    }
    let again = build_index(&corpus, analyzer).map_err(|e| e.to_string())?;
    let (a, b) = (
        index.to_bytes().map_err(|e| e.to_string())?,
        again.to_bytes().map_err(|e| e.to_string())?,
    );
    ensure(a == b, || "rebuild differs".into())?;

    let three = ParallelCorpus::new(
        [
            ("int get size", "gets the size"),
            ("void set size int", "sets the size"),
            ("void clear list", "clears the list"),
        ]
        .iter()
        .enumerate()
        .map(|(i, (s, t))| ParallelExample {
            id: i.to_string(),
            source: TokenSequence::from_spaced(s),
            target: TokenSequence::from_spaced(t),
            meta: None,
        })
        .collect(),
    );
    let idx3 = build_index(&three, AnalyzerConfig::new(TokenizerConfig::whitespace())).map_err(|e| e.to_string())?;
    let hits = idx3.retrieve("void set", 3, Bm25Params::default());
    // avgdl 10/3; idf(void) = ln(1 + 1.5/2.5), idf(set) = ln(1 + 2.5/1.5).
    let norm = |dl: f64| 1.0 + 1.2 * (0.25 + 0.75 * dl / (10.0 / 3.0));
    let d1 = ((1.6f64).ln() + (8.0f64 / 3.0).ln()) * 2.2 / norm(4.0);
    let d2 = (1.6f64).ln() * 2.2 / norm(3.0);
    ensure(hits.len() == 2 && hits[0].doc == 1 && hits[1].doc == 2, || {
        format!("ranking {hits:?}")
    })?;
    ensure(
        (hits[0].score - d1).abs() < 1e-12 && (hits[1].score - d2).abs() < 1e-12,
        || format!("scores {hits:?}, hand {d1} {d2}"),
    )?;
    within(t.elapsed(), 30)?;
    Ok(format!(
        "1000-doc self-retrieval 100.00 x7, 3-doc ranking exact, rebuild {} bytes identical",
        a.len()
    ))
}

/// Ten projects of 90 classes with 5 methods each. Comments share a trigram
/// per project and another per class; the rest is drawn from a large
/// vocabulary.
fn three_level_corpus() -> Vec<MethodRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut out = Vec::new();
    for p in 0..10 {
        for c in 0..90 {
            for m in 0..5 {
                let filler: Vec<String> = (0..4).map(|_| format!("v{}", rng.random_range(0..5000))).collect();
                let comment = format!("p{p}a p{p}b p{p}c c{p}x{c}a c{p}x{c}b c{p}x{c}c {}", filler.join(" "));
                out.push(MethodRecord {
                    project: format!("proj{p}"),
                    path: format!("proj{p}/C{c}.java"),
                    class_name: format!("C{c}"),
                    method_name: format!("m{m}"),
                    param_count: 0,
                    comment: TokenSequence::from_spaced(&comment),
                    body: String::new(),
                });
            }
        }
    }
    out
}

fn affinity_ordering() -> Check {
    let t = Instant::now();
    let records = three_level_corpus();
    let mut means = Vec::new();
    for kind in [
        AffinityGroupKind::IntraClass,
        AffinityGroupKind::IntraProject,
        AffinityGroupKind::InterProject,
    ] {
        let mut opts = SampleOptions::new(42);
        opts.count = 5000;
        let sample = sample_pairs(&records, kind, opts).map_err(|e| e.to_string())?;
        ensure(sample.pairs.len() == 5000, || {
            format!("{kind}: {} pairs", sample.pairs.len())
        })?;
        let report = affinity_report(&records, &sample, &[BleuVariant::M2]).map_err(|e| e.to_string())?;
        means.push(report.summary(BleuVariant::M2).unwrap().mean);
    }
    let (ic, ip, xp) = (means[0], means[1], means[2]);
    ensure(ic - ip > 2.0 && ip - xp > 2.0, || {
        format!("means {ic:.2} / {ip:.2} / {xp:.2}")
    })?;
    within(t.elapsed(), 60)?;
    Ok(format!(
        "M2 means intra_class {ic:.2} > intra_project {ip:.2} > inter_project {xp:.2}"
    ))
}

fn variant_spread() -> Check {
    let records = read_records_jsonl(common::fixture("affinity/records.jsonl")).map_err(|e| e.to_string())?;
    let text =
        std::fs::read_to_string(common::fixture("affinity/intra_class_pairs.json")).map_err(|e| e.to_string())?;
    let sample: PairSample = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(sample.kind == AffinityGroupKind::IntraClass, || {
        "fixture is not intra_class".into()
    })?;
    check_sample(&records, &sample).map_err(|e| e.to_string())?;
    let report = affinity_report(&records, &sample, &BleuVariant::ALL).map_err(|e| e.to_string())?;
    let spread = report.variant_spread();
    ensure(spread >= 3.0, || format!("spread {spread:.2}"))?;
    Ok(format!("spread {spread:.2} over {} pairs", sample.pairs.len()))
}

/// `COMMENTBENCH_DEEPCOM2F` names a directory of fold directories, each with
/// `train.jsonl` and `test.jsonl` in the published tokenization.
fn deepcom2f() -> Option<Check> {
    let root = std::env::var_os("COMMENTBENCH_DEEPCOM2F")?;
    let run = || -> Check {
        let mut folds: Vec<_> = std::fs::read_dir(Path::new(&root))
            .map_err(|e| e.to_string())?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.join("train.jsonl").is_file() && p.join("test.jsonl").is_file())
            .collect();
        folds.sort();
        ensure(!folds.is_empty(), || "no folds with train.jsonl and test.jsonl".into())?;
        let opts = LoadOptions::default();
        let mut scores = Vec::new();
        for f in &folds {
            let (train, _) = load_jsonl(f.join("train.jsonl"), &opts).map_err(|e| e.to_string())?;
            let (test, _) = load_jsonl(f.join("test.jsonl"), &opts).map_err(|e| e.to_string())?;
            let index = build_index(&train, AnalyzerConfig::default()).map_err(|e| e.to_string())?;
            let r = ir_eval(&index, &test, BleuVariant::Dc, Bm25Params::default()).map_err(|e| e.to_string())?;
            scores.push(r.rounded_score());
        }
        let bad: Vec<_> = scores.iter().filter(|s| !(20.6..=48.4).contains(*s)).collect();
        ensure(bad.is_empty(), || format!("folds outside 20.6-48.4: {scores:?}"))?;
        Ok(format!("DC per fold {scores:?}"))
    };
    Some(run())
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("tokenization-swing", tokenization_swing),
        ("metric-oracle-equivalence", metric_oracle),
        ("metric-identities", metric_identities),
        ("corpus-rescue", corpus_rescue),
        ("ablation-curve", ablation),
        ("statistics-spearman-fixture", spearman_fixture),
        ("statistics-bh-fixture", bh_fixture),
        ("statistics-monotone", monotone),
        ("ir-baseline", ir_baseline),
        ("affinity-ordering", affinity_ordering),
        ("variant-spread", variant_spread),
    ];
    let mut unexpected = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name} ({secs:.2}s): {detail}"),
            Err(why) => match KNOWN_RED.iter().find(|(n, _)| *n == name) {
                Some((_, note)) => println!("FAIL {name} ({secs:.2}s): {why} [known: {note}]"),
                None => {
                    unexpected += 1;
                    println!("FAIL {name} ({secs:.2}s): {why}");
                }
            },
        }
    }
    match deepcom2f() {
        None => println!("SKIP deepcom2f-ir-dc-range: set COMMENTBENCH_DEEPCOM2F to a directory of folds"),
        Some(Ok(detail)) => println!("PASS deepcom2f-ir-dc-range: {detail}"),
        Some(Err(why)) => {
            unexpected += 1;
            println!("FAIL deepcom2f-ir-dc-range: {why}");
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
