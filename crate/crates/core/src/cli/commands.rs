use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::args::{AffinityCmd, AnalyzeCmd, AnalyzerArgs, Bm25Args, Command, IndexSource, IrCmd, ScoreArgs, Side};
use super::CliError;
use crate::affinity::{
    affinity_report, check_sample, extract_methods, filter_records, read_records_jsonl, sample_pairs,
    write_records_jsonl, AffinityGroupKind, ExtractOptions, ExtractReport, PairSample, SampleOptions,
};
use crate::analysis::{
    ablation_curve, bh_adjust, dependence_report, hexbin, sample_bivariate, zipf_slope, zipf_table, CorrelationResult,
};
use crate::corpus::{
    load_jsonl, load_parallel_files, Language, LoadOptions, ParallelCorpus, Stoplist, TokenSequence, TokenizerConfig,
};
use crate::error::{Error, Result};
use crate::export;
use crate::manifest::RunManifest;
use crate::metrics::{score_set, BleuVariant, ScoredPair};
use crate::plot;
use crate::retrieval::{build_index, AnalyzerConfig, Bm25Params, Index};

type CmdResult = std::result::Result<(), CliError>;

/// Points drawn per Zipf series; the tables keep every rank.
const ZIPF_PLOT_RANKS: usize = 1000;

pub(crate) fn dispatch(cmd: Command, args: Vec<String>) -> CmdResult {
    match cmd {
        Command::Score(a) => score(a),
        Command::Analyze(c) => analyze(c, &args),
        Command::Ir(c) => ir(c, &args),
        Command::Affinity(c) => affinity(c, &args),
    }
}

fn emit<T: Serialize + ?Sized>(value: &T) -> CmdResult {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(Error::from)?;
    writeln!(out).map_err(|e| Error::io("<stdout>", e))?;
    Ok(())
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn tokenizer(spec: &str) -> std::result::Result<TokenizerConfig, CliError> {
    spec.parse().map_err(|e: Error| usage(e.to_string()))
}

fn variants(names: &[String]) -> std::result::Result<Vec<BleuVariant>, CliError> {
    let vs = BleuVariant::parse_list(names).map_err(|e| usage(e.to_string()))?;
    if vs.is_empty() {
        return Err(usage("no variant given"));
    }
    Ok(vs)
}

fn bm25(a: &Bm25Args) -> std::result::Result<Bm25Params, CliError> {
    Bm25Params::new(a.k1, a.b).map_err(|e| usage(e.to_string()))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// `<file>.manifest.json` next to a single-file output.
fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    path.with_file_name(name)
}

fn manifest(command: &str, args: &[String], inputs: &[PathBuf]) -> Result<RunManifest> {
    let mut m = RunManifest::new(command, args.to_vec());
    for p in inputs {
        m.input(p)?;
    }
    Ok(m)
}

struct Loaded {
    name: String,
    inputs: Vec<PathBuf>,
    corpus: ParallelCorpus,
}

/// `data.jsonl` or `code.txt,comments.txt`.
fn load_corpus(spec: &str, opts: &LoadOptions) -> Result<Loaded> {
    let (inputs, (corpus, report)) = match spec.split_once(',') {
        Some((src, tgt)) => {
            let inputs = vec![PathBuf::from(src), PathBuf::from(tgt)];
            (inputs, load_parallel_files(src, tgt, opts)?)
        }
        None => (vec![PathBuf::from(spec)], load_jsonl(spec, opts)?),
    };
    for s in &report.skipped {
        eprintln!("warning: {spec}: line {} skipped: {}", s.line, s.reason);
    }
    eprintln!("loaded {} examples from {spec}", corpus.len());
    let name = inputs[0]
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string())
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    Ok(Loaded { name, inputs, corpus })
}

/// Loads every corpus, making file-name stems unique.
fn load_all(specs: &[String], opts: &LoadOptions) -> Result<Vec<Loaded>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let mut c = load_corpus(spec, opts)?;
        if !seen.insert(c.name.clone()) {
            c.name = format!("{}_{}", c.name, i + 1);
            seen.insert(c.name.clone());
        }
        out.push(c);
    }
    Ok(out)
}

fn all_inputs(corpora: &[Loaded]) -> Vec<PathBuf> {
    corpora.iter().flat_map(|c| c.inputs.iter().cloned()).collect()
}

fn score(a: ScoreArgs) -> CmdResult {
    let tok = tokenizer(&a.tokenizer)?;
    let vs = variants(&a.variant)?;
    let opts = LoadOptions::default().strict(true).allow_empty(true).tokenizer(tok);
    let mut cands: Vec<TokenSequence> = Vec::new();
    let mut ref_sets: Vec<Vec<TokenSequence>> = Vec::new();
    for (i, r) in a.refs.iter().enumerate() {
        let (c, _) = load_parallel_files(&a.cand, r, &opts)?;
        if i == 0 {
            cands = c.sources().cloned().collect();
        }
        ref_sets.push(c.targets().cloned().collect());
    }
    let refs: Vec<Vec<&[String]>> = (0..cands.len())
        .map(|i| ref_sets.iter().map(|set| set[i].tokens()).collect())
        .collect();
    let pairs: Vec<ScoredPair<'_, &[String]>> = cands
        .iter()
        .zip(&refs)
        .map(|(c, r)| ScoredPair::new(c.tokens(), r))
        .collect();
    let mut reports = Vec::new();
    for v in vs {
        let mut r = score_set(&pairs, v)?;
        if !a.per_example {
            r.per_example_scores = None;
        }
        reports.push(r);
    }
    emit(&reports)
}

#[derive(Serialize)]
struct Named<T: Serialize> {
    corpus: String,
    #[serde(flatten)]
    value: T,
}

#[derive(Serialize)]
struct ZipfSummary {
    n: usize,
    total_ngrams: usize,
    distinct: usize,
    /// Missing when the table has fewer ranks than the fit needs.
    slope: Option<f64>,
}

#[derive(Serialize)]
struct BivariateSummary {
    n_pairs: usize,
    #[serde(flatten)]
    correlation: CorrelationResult,
    p_nonzero_adjusted: Option<f64>,
    p_all_adjusted: Option<f64>,
}

/// BH over the defined p-values, leaving undefined ones undefined.
fn adjust(ps: &[Option<f64>]) -> Result<Vec<Option<f64>>> {
    let defined: Vec<f64> = ps.iter().flatten().copied().collect();
    let mut adjusted = bh_adjust(&defined)?.into_iter();
    Ok(ps.iter().map(|p| p.and_then(|_| adjusted.next())).collect())
}

fn analyze(cmd: AnalyzeCmd, args: &[String]) -> CmdResult {
    match cmd {
        AnalyzeCmd::Zipf {
            corpus,
            side,
            n,
            head,
            out,
        } => {
            let opts = LoadOptions::default().tokenizer(tokenizer(&corpus.tokenizer)?);
            let corpora = load_all(&corpus.corpus, &opts)?;
            if let Some(dir) = &out {
                create_dir(dir)?;
            }
            let mut m = manifest("analyze zipf", args, &all_inputs(&corpora))?;
            let mut summaries = Vec::new();
            for &order in &n {
                let mut series = Vec::new();
                for c in &corpora {
                    let table = match side {
                        Side::Source => zipf_table(c.corpus.sources(), order)?,
                        Side::Target => zipf_table(c.corpus.targets(), order)?,
                    };
                    let slope = match zipf_slope(&table, head) {
                        Ok(s) => Some(s),
                        Err(e) => {
                            eprintln!("warning: {}: no slope for n = {order}: {e}", c.name);
                            None
                        }
                    };
                    if let Some(dir) = &out {
                        let file = format!("zipf_{}_n{order}.csv", c.name);
                        write_with(&dir.join(&file), |w| export::write_zipf_csv(&table, w))?;
                        m.output(file);
                    }
                    series.push((
                        c.name.as_str(),
                        table
                            .rows
                            .iter()
                            .take(ZIPF_PLOT_RANKS)
                            .enumerate()
                            .map(|(i, r)| ((i + 1) as f64, r.rel_freq))
                            .collect::<Vec<_>>(),
                    ));
                    summaries.push(Named {
                        corpus: c.name.clone(),
                        value: ZipfSummary {
                            n: order,
                            total_ngrams: table.total_ngrams,
                            distinct: table.rows.len(),
                            slope,
                        },
                    });
                }
                if let Some(dir) = &out {
                    let series: Vec<plot::Series<'_>> = series
                        .into_iter()
                        .map(|(name, points)| plot::Series { name, points })
                        .collect();
                    let svg = plot::line_plot(
                        &format!("{order}-gram rank frequency"),
                        "rank",
                        "relative frequency",
                        &series,
                        true,
                        true,
                    );
                    let file = format!("zipf_n{order}.svg");
                    write_text(&dir.join(&file), &svg)?;
                    m.output(file);
                }
            }
            if let Some(dir) = &out {
                m.write(dir)?;
            }
            emit(&summaries)
        }
        AnalyzeCmd::Ablate {
            corpus,
            n,
            k_max,
            seed,
            out,
        } => {
            let opts = LoadOptions::default().tokenizer(tokenizer(&corpus.tokenizer)?);
            let corpora = load_all(&corpus.corpus, &opts)?;
            if let Some(dir) = &out {
                create_dir(dir)?;
            }
            let mut m = manifest("analyze ablate", args, &all_inputs(&corpora))?;
            m.seed(seed);
            let mut curves = Vec::new();
            for c in &corpora {
                let targets: Vec<&TokenSequence> = c.corpus.targets().collect();
                let curve = ablation_curve(&targets, n, k_max, seed)?;
                if let Some(dir) = &out {
                    let file = format!("ablation_{}_n{n}.csv", c.name);
                    write_with(&dir.join(&file), |w| export::write_ablation_csv(&curve, w))?;
                    m.output(file);
                }
                curves.push(Named {
                    corpus: c.name.clone(),
                    value: curve,
                });
            }
            if let Some(dir) = &out {
                let series: Vec<plot::Series<'_>> = curves
                    .iter()
                    .map(|c| plot::Series {
                        name: &c.corpus,
                        points: c.value.points.iter().map(|p| (p.k as f64, p.bleu)).collect(),
                    })
                    .collect();
                let svg = plot::line_plot(
                    &format!("BLEU-M2 after removing the top-k {n}-grams"),
                    "k",
                    "BLEU-M2",
                    &series,
                    false,
                    false,
                );
                let file = format!("ablation_n{n}.svg");
                write_text(&dir.join(&file), &svg)?;
                m.output(file);
                m.write(dir)?;
            }
            emit(&curves)
        }
        AnalyzeCmd::Bivariate {
            corpus,
            count,
            seed,
            epsilon,
            bins,
            out,
        } => {
            if !(0.0..1.0).contains(&epsilon) {
                return Err(usage(format!("--epsilon must be in [0, 1), got {epsilon}")));
            }
            let opts = LoadOptions::default().tokenizer(tokenizer(&corpus.tokenizer)?);
            let corpora = load_all(&corpus.corpus, &opts)?;
            if let Some(dir) = &out {
                create_dir(dir)?;
            }
            let mut m = manifest("analyze bivariate", args, &all_inputs(&corpora))?;
            m.seed(seed);
            let mut results = Vec::new();
            for c in &corpora {
                let sample = sample_bivariate(&c.corpus, count, seed, epsilon)?;
                let correlation = dependence_report(&sample)?;
                let grid = hexbin(&sample, bins)?;
                if let Some(dir) = &out {
                    let file = format!("bivariate_{}.csv", c.name);
                    write_with(&dir.join(&file), |w| export::write_bivariate_csv(&sample, w))?;
                    m.output(file);
                    let file = format!("hexbin_{}.csv", c.name);
                    write_with(&dir.join(&file), |w| export::write_hexbin_csv(&grid, w))?;
                    m.output(file);
                    let svg = plot::hexbin_svg(
                        &grid,
                        &format!("{}: input vs output similarity", c.name),
                        "input similarity (BLEU-M2)",
                        "output similarity (BLEU-M2)",
                    );
                    let file = format!("hexbin_{}.svg", c.name);
                    write_text(&dir.join(&file), &svg)?;
                    m.output(file);
                }
                results.push((c.name.clone(), sample.pairs.len(), correlation));
            }
            let nz = adjust(&results.iter().map(|r| r.2.p_nonzero).collect::<Vec<_>>())?;
            let all = adjust(&results.iter().map(|r| r.2.p_all).collect::<Vec<_>>())?;
            let summaries: Vec<_> = results
                .into_iter()
                .zip(nz.into_iter().zip(all))
                .map(|((name, n_pairs, correlation), (p_nz, p_all))| Named {
                    corpus: name,
                    value: BivariateSummary {
                        n_pairs,
                        correlation,
                        p_nonzero_adjusted: p_nz,
                        p_all_adjusted: p_all,
                    },
                })
                .collect();
            if let Some(dir) = &out {
                m.write(dir)?;
            }
            emit(&summaries)
        }
    }
}

fn analyzer(a: &AnalyzerArgs) -> std::result::Result<AnalyzerConfig, CliError> {
    let stoplist = match a.stoplist.as_deref().map(str::to_ascii_lowercase).as_deref() {
        None => None,
        Some("java") => Some(Stoplist::for_language(Language::Java)),
        Some("python") => Some(Stoplist::for_language(Language::Python)),
        Some(other) => return Err(usage(format!("unknown stoplist {other:?}; expected java or python"))),
    };
    Ok(AnalyzerConfig::new(tokenizer(&a.tokenizer)?)
        .with_expansion(a.expand_subtokens)
        .with_stoplist(stoplist))
}

fn build_from(train: &str, a: &AnalyzerArgs) -> std::result::Result<(Index, Vec<PathBuf>), CliError> {
    let cfg = analyzer(a)?;
    let opts = LoadOptions::default().tokenizer(cfg.tokenizer.clone());
    let loaded = load_corpus(train, &opts)?;
    let index = build_index(&loaded.corpus, cfg)?;
    Ok((index, loaded.inputs))
}

fn open_index(src: &IndexSource) -> std::result::Result<(Index, Vec<PathBuf>), CliError> {
    match (&src.snapshot, &src.train) {
        (Some(path), _) => Ok((Index::load(path)?, vec![path.clone()])),
        (None, Some(train)) => build_from(train, &src.analyzer),
        (None, None) => Err(usage("one of --snapshot or --train is required")),
    }
}

#[derive(Serialize)]
struct IndexSummary {
    snapshot: String,
    n_docs: usize,
    n_terms: usize,
    avgdl: f64,
}

#[derive(Serialize)]
struct QueryHit {
    rank: usize,
    doc: usize,
    id: String,
    score: f64,
    comment: String,
}

#[derive(Serialize)]
struct QueryResult {
    query_terms: Vec<String>,
    fallback: bool,
    hits: Vec<QueryHit>,
}

fn ir(cmd: IrCmd, args: &[String]) -> CmdResult {
    match cmd {
        IrCmd::Index {
            train,
            snapshot,
            analyzer,
        } => {
            let (index, inputs) = build_from(&train, &analyzer)?;
            index.save(&snapshot)?;
            let mut m = manifest("ir index", args, &inputs)?;
            m.output(snapshot.display().to_string());
            m.write_to(sidecar(&snapshot))?;
            emit(&IndexSummary {
                snapshot: snapshot.display().to_string(),
                n_docs: index.n_docs(),
                n_terms: index.terms().count(),
                avgdl: index.avgdl(),
            })
        }
        IrCmd::Query {
            index,
            code,
            k,
            bm25: p,
        } => {
            let params = bm25(&p)?;
            let (index, _) = open_index(&index)?;
            let terms = index.analyzer().analyze(&code);
            let hits = index.retrieve_terms(&terms, k, params);
            if hits.is_empty() {
                eprintln!(
                    "no indexed document shares a term with the query; generation falls back to an empty comment"
                );
            }
            let hits = hits
                .into_iter()
                .enumerate()
                .map(|(i, h)| QueryHit {
                    rank: i + 1,
                    doc: h.doc,
                    id: index.doc_id(h.doc).unwrap_or_default().to_string(),
                    score: h.score,
                    comment: index.payload(h.doc).map(|c| c.joined()).unwrap_or_default(),
                })
                .collect::<Vec<_>>();
            emit(&QueryResult {
                query_terms: terms,
                fallback: hits.is_empty(),
                hits,
            })
        }
        IrCmd::Eval {
            index,
            test,
            variant,
            bm25: p,
            per_example,
            out,
        } => {
            let params = bm25(&p)?;
            let vs = variants(&variant)?;
            let (index, mut inputs) = open_index(&index)?;
            let opts = LoadOptions::default().tokenizer(index.analyzer().tokenizer.clone());
            let test = load_corpus(&test, &opts)?;
            inputs.extend(test.inputs.iter().cloned());
            let mut reports = Vec::new();
            for v in vs {
                let mut r = crate::retrieval::ir_eval(&index, &test.corpus, v, params)?;
                eprintln!(
                    "{}: {:.2} ({} fallbacks of {})",
                    v,
                    r.rounded_score(),
                    r.fallbacks,
                    r.rows.len()
                );
                if !per_example {
                    r.report.per_example_scores = None;
                }
                reports.push(r);
            }
            if let Some(dir) = &out {
                create_dir(dir)?;
                let mut m = manifest("ir eval", args, &inputs)?;
                write_with(&dir.join("ir_eval.tsv"), |w| reports[0].write_tsv(w))?;
                m.output("ir_eval.tsv");
                m.write(dir)?;
            }
            emit(&reports)
        }
    }
}

#[derive(Serialize)]
struct ExtractSummary {
    #[serde(flatten)]
    report: ExtractReport,
    kept: usize,
    out: String,
}

fn group_kind(s: &str) -> std::result::Result<AffinityGroupKind, CliError> {
    s.parse().map_err(|e: Error| usage(e.to_string()))
}

fn read_pairs(path: &Path) -> Result<PairSample> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn affinity(cmd: AffinityCmd, args: &[String]) -> CmdResult {
    match cmd {
        AffinityCmd::Extract {
            root,
            out,
            full_comment,
            no_filter,
            tokenizer: tok,
        } => {
            let opts = ExtractOptions {
                full_comment,
                tokenizer: tokenizer(&tok)?,
            };
            let (records, report) = extract_methods(&root, &opts)?;
            let kept = if no_filter { records } else { filter_records(&records) };
            eprintln!(
                "{} files, {} documented methods, {} kept",
                report.files,
                report.records,
                kept.len()
            );
            write_with(&out, |w| write_records_jsonl(&kept, w))?;
            let mut m = manifest("affinity extract", args, &[root])?;
            m.output(out.display().to_string());
            m.write_to(sidecar(&out))?;
            emit(&ExtractSummary {
                report,
                kept: kept.len(),
                out: out.display().to_string(),
            })
        }
        AffinityCmd::Sample {
            records: path,
            kind,
            pairs,
            seed,
            out,
        } => {
            let kind = group_kind(&kind)?;
            let records = read_records_jsonl(&path)?;
            let opts = SampleOptions {
                count: pairs.count,
                seed,
                max_per_class: pairs.max_per_class,
            };
            let sample = sample_pairs(&records, kind, opts)?;
            match out {
                Some(file) => {
                    write_with(&file, |w| Ok(serde_json::to_writer_pretty(w, &sample)?))?;
                    let mut m = manifest("affinity sample", args, &[path])?;
                    m.seed(seed).output(file.display().to_string());
                    m.write_to(sidecar(&file))?;
                    eprintln!("{} {} pairs written to {}", sample.pairs.len(), kind, file.display());
                    Ok(())
                }
                None => emit(&sample),
            }
        }
        AffinityCmd::Report {
            records: path,
            pairs,
            kind,
            sampling,
            seed,
            variant,
            plot_variant,
            out,
        } => {
            let vs = variants(&variant)?;
            let plot_variant: BleuVariant = plot_variant.parse().map_err(|e: Error| usage(e.to_string()))?;
            if !vs.contains(&plot_variant) {
                return Err(usage(format!(
                    "--plot-variant {plot_variant} is not among the reported variants"
                )));
            }
            let records = read_records_jsonl(&path)?;
            let mut inputs = vec![path];
            let mut seeds = Vec::new();
            let samples = if pairs.is_empty() {
                let seed = seed.ok_or_else(|| usage("--seed is required when sampling pairs"))?;
                seeds.push(seed);
                let kinds = if kind.is_empty() {
                    AffinityGroupKind::ALL.to_vec()
                } else {
                    kind.iter()
                        .map(|k| group_kind(k))
                        .collect::<std::result::Result<_, _>>()?
                };
                let opts = SampleOptions {
                    count: sampling.count,
                    seed,
                    max_per_class: sampling.max_per_class,
                };
                kinds
                    .into_iter()
                    .map(|k| sample_pairs(&records, k, opts))
                    .collect::<Result<Vec<_>>>()?
            } else {
                let mut samples = Vec::new();
                for p in &pairs {
                    let s = read_pairs(p)?;
                    check_sample(&records, &s)?;
                    seeds.push(s.seed);
                    samples.push(s);
                }
                inputs.extend(pairs);
                samples
            };
            let reports = samples
                .iter()
                .map(|s| affinity_report(&records, s, &vs))
                .collect::<Result<Vec<_>>>()?;
            for r in &reports {
                if let Some(s) = r.summary(plot_variant) {
                    eprintln!(
                        "{}: {} mean {:.2} over {} pairs",
                        r.kind, plot_variant, s.mean, r.n_pairs
                    );
                }
            }
            if let Some(dir) = &out {
                create_dir(dir)?;
                let mut m = manifest("affinity report", args, &inputs)?;
                for s in seeds {
                    m.seed(s);
                }
                write_with(&dir.join("affinity_scores.csv"), |w| {
                    export::write_affinity_scores_csv(&reports, w)
                })?;
                m.output("affinity_scores.csv");
                let groups: Vec<(String, Vec<f64>)> = reports
                    .iter()
                    .filter_map(|r| r.summary(plot_variant).map(|s| (r.kind.to_string(), s.scores.clone())))
                    .collect();
                let svg = plot::violin_svg(
                    &format!("{plot_variant} by affinity group"),
                    plot_variant.name(),
                    &groups,
                );
                let file = format!("affinity_{}.svg", plot_variant.name());
                write_text(&dir.join(&file), &svg)?;
                m.output(file);
                m.write(dir)?;
            }
            emit(&reports)
        }
    }
}
