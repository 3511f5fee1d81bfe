//! N-gram machinery and the seven BLEU variants used to evaluate generated
//! code comments.
//!
//! | variant | aggregation | smoothing                                   |
//! |---------|-------------|---------------------------------------------|
//! | CN      | sentence    | add-one for n ≥ 2                           |
//! | M2      | sentence    | add-one for n ≥ 2                           |
//! | NCS     | sentence    | add-one for all n                           |
//! | DC      | sentence    | zero orders → 1/((n−1) + 5/ln(len))         |
//! | FC      | corpus      | none                                        |
//! | Moses   | corpus      | none                                        |
//! | Sacre   | corpus      | zero orders → 1/(2^k · c_n), k = 1, 2, ..   |
//!
//! Candidates shorter than `n` contribute `0 / 1` at that order, so every
//! variant is defined for short outputs. Scores are on the 0–100 scale.

mod bleu;
mod ngram;
mod report;
mod variant;

pub use bleu::{
    brevity_penalty, corpus_bleu, pair_bleu, sentence_bleu, BleuBreakdown, BleuCounts, ScoredPair, MAX_ORDER,
};
pub use ngram::{modified_precision, ngrams, NgramCounts, PrecisionFraction};
pub use report::{round2, score_set, ScoreReport};
pub use variant::{Aggregation, BleuVariant, Smoothing};

pub(crate) use report::{order_free_mean, ser_round2};
