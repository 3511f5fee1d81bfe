//! Evaluation tooling for code-to-comment generation.
//!
//! * [`corpus`]: loading parallel corpora, tokenization and statistics.
//! * [`metrics`]: the BLEU variants in use across code-comment datasets.
//! * [`analysis`]: Zipf tables, n-gram ablation, input/output dependence.
//! * [`retrieval`]: a BM25 nearest-neighbour baseline.
//! * [`affinity`]: affinity-group calibration over Java methods.
//! * [`cli`]: the `commentbench` command line.
//! * [`export`], [`plot`], [`manifest`]: CSV tables, SVG plots and run records.

pub mod affinity;
pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod export;
pub mod manifest;
pub mod metrics;
pub mod plot;
pub mod retrieval;

pub use error::{Error, Result};
