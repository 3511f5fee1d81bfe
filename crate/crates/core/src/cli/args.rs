use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "commentbench",
    version,
    about = "BLEU variants, corpus analyses, a BM25 baseline and affinity groups for code-comment data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score candidate lines against reference lines.
    Score(ScoreArgs),
    /// Zipf tables, n-gram ablation and input/output dependence.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// BM25 retrieval baseline.
    #[command(subcommand)]
    Ir(IrCmd),
    /// Affinity groups over Java methods.
    #[command(subcommand)]
    Affinity(AffinityCmd),
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub cand: PathBuf,
    /// Reference file; repeat for multiple references per line.
    #[arg(long = "ref", required = true)]
    pub refs: Vec<PathBuf>,
    /// Variant names or `all`.
    #[arg(long, num_args = 1.., default_value = "all")]
    pub variant: Vec<String>,
    #[arg(long, default_value = "passthrough")]
    pub tokenizer: String,
    /// Include per-line scores for sentence variants.
    #[arg(long)]
    pub per_example: bool,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// `data.jsonl` or `code.txt,comments.txt`; repeatable.
    #[arg(long, required = true)]
    pub corpus: Vec<String>,
    #[arg(long, default_value = "passthrough")]
    pub tokenizer: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Side {
    Source,
    Target,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCmd {
    Zipf {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum, default_value = "target")]
        side: Side,
        #[arg(long, num_args = 1.., default_values_t = [1usize])]
        n: Vec<usize>,
        /// Ranks used for the slope fit.
        #[arg(long, default_value_t = 100)]
        head: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Ablate {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// 1 or 3.
        #[arg(long, default_value_t = 1, value_parser = ablation_order)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Bivariate {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = crate::analysis::DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct AnalyzerArgs {
    #[arg(long, default_value = "passthrough")]
    pub tokenizer: String,
    /// Index each compound identifier together with its subtokens.
    #[arg(long)]
    pub expand_subtokens: bool,
    /// `java` or `python` keyword list.
    #[arg(long)]
    pub stoplist: Option<String>,
}

#[derive(Debug, Args)]
pub struct IndexSource {
    /// Prebuilt index.
    #[arg(long, conflicts_with = "train", required_unless_present = "train")]
    pub snapshot: Option<PathBuf>,
    /// Build the index from this corpus instead.
    #[arg(long)]
    pub train: Option<String>,
    #[command(flatten)]
    pub analyzer: AnalyzerArgs,
}

#[derive(Debug, Args)]
pub struct Bm25Args {
    #[arg(long, default_value_t = 1.2)]
    pub k1: f64,
    #[arg(long, default_value_t = 0.75)]
    pub b: f64,
}

#[derive(Debug, Subcommand)]
pub enum IrCmd {
    Index {
        #[arg(long)]
        train: String,
        #[arg(long)]
        snapshot: PathBuf,
        #[command(flatten)]
        analyzer: AnalyzerArgs,
    },
    Query {
        #[command(flatten)]
        index: IndexSource,
        #[arg(long)]
        code: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[command(flatten)]
        bm25: Bm25Args,
    },
    Eval {
        #[command(flatten)]
        index: IndexSource,
        #[arg(long)]
        test: String,
        #[arg(long, num_args = 1.., default_value = "all")]
        variant: Vec<String>,
        #[command(flatten)]
        bm25: Bm25Args,
        #[arg(long)]
        per_example: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long, default_value_t = crate::affinity::DEFAULT_PAIR_COUNT)]
    pub count: usize,
    #[arg(long, default_value_t = crate::affinity::DEFAULT_MAX_PER_CLASS)]
    pub max_per_class: usize,
}

#[derive(Debug, Subcommand)]
pub enum AffinityCmd {
    Extract {
        #[arg(long)]
        root: PathBuf,
        /// JSONL records.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        full_comment: bool,
        /// Keep getters, setters and overloads.
        #[arg(long)]
        no_filter: bool,
        #[arg(long, default_value = "punctuation+lowercase")]
        tokenizer: String,
    },
    Sample {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        kind: String,
        #[command(flatten)]
        pairs: PairArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Report {
        #[arg(long)]
        records: PathBuf,
        /// Pair samples written by `affinity sample`.
        #[arg(long, conflicts_with = "kind")]
        pairs: Vec<PathBuf>,
        /// Groups to sample when no pair files are given; default all three.
        #[arg(long)]
        kind: Vec<String>,
        #[command(flatten)]
        sampling: PairArgs,
        #[arg(long, required_unless_present = "pairs")]
        seed: Option<u64>,
        #[arg(long, num_args = 1.., default_value = "all")]
        variant: Vec<String>,
        /// Variant drawn in the violin plot.
        #[arg(long, default_value = "M2")]
        plot_variant: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn ablation_order(s: &str) -> Result<usize, String> {
    match s.trim() {
        "1" => Ok(1),
        "3" => Ok(3),
        _ => Err(format!("expected 1 or 3, got {s:?}")),
    }
}
