use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use super::bleu::{corpus_counts, pair_bleu, BleuBreakdown, ScoredPair};
use super::variant::{Aggregation, BleuVariant};
use crate::error::{Error, Result};

/// Rounds to the 2-decimal reporting precision.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

pub(crate) fn ser_round2<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round2(*x))
}

fn ser_round2_vec<S: Serializer>(xs: &Option<Vec<f64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match xs {
        Some(v) => s.collect_seq(v.iter().map(|x| round2(*x))),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub variant: BleuVariant,
    pub aggregation: Aggregation,
    pub n_examples: usize,
    #[serde(serialize_with = "ser_round2")]
    pub score: f64,
    #[serde(
        rename = "per_example",
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_round2_vec"
    )]
    pub per_example_scores: Option<Vec<f64>>,
    /// Cumulative breakdown; only kept for corpus variants.
    #[serde(skip)]
    pub breakdown: Option<BleuBreakdown>,
}

/// Mean that does not depend on the order of `xs`.
pub(crate) fn order_free_mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().sum::<f64>() / sorted.len() as f64
}

/// Scores a set of pairs the way `variant` aggregates: mean of sentence scores
/// or a single corpus computation.
pub fn score_set<R>(pairs: &[ScoredPair<'_, R>], variant: BleuVariant) -> Result<ScoreReport>
where
    R: AsRef<[String]> + Sync,
{
    if pairs.is_empty() {
        return Err(Error::EmptyInput("pair list"));
    }
    match variant.aggregation() {
        Aggregation::Sentence => {
            let per: Vec<f64> = pairs
                .par_iter()
                .map(|p| pair_bleu(p.candidate, p.references, variant).map(|b| b.score))
                .collect::<Result<_>>()?;
            Ok(ScoreReport {
                variant,
                aggregation: Aggregation::Sentence,
                n_examples: pairs.len(),
                score: order_free_mean(&per),
                per_example_scores: Some(per),
                breakdown: None,
            })
        }
        Aggregation::Corpus => {
            let breakdown = corpus_counts(pairs)?.finish(variant.smoothing());
            Ok(ScoreReport {
                variant,
                aggregation: Aggregation::Corpus,
                n_examples: pairs.len(),
                score: breakdown.score,
                per_example_scores: None,
                breakdown: Some(breakdown),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TokenSequence;

    fn s(text: &str) -> TokenSequence {
        TokenSequence::from_spaced(text)
    }

    #[test]
    fn sentence_mean_of_perfect_and_zero() {
        let a = s("a b c d");
        let b = s("w x y z");
        let (ra, rb) = ([a.clone()], [s("p q r s")]);
        let pairs = [ScoredPair::new(&a, &ra), ScoredPair::new(&b, &rb)];
        let rep = score_set(&pairs, BleuVariant::M2).unwrap();
        assert_eq!(rep.score, 50.0);
        assert_eq!(rep.per_example_scores.as_deref(), Some(&[100.0, 0.0][..]));
        assert_eq!(rep.n_examples, 2);
    }

    #[test]
    fn json_shape() {
        let a = s("a b c d e");
        let r = [s("a b c d f")];
        let pairs = [ScoredPair::new(&a, &r)];
        let rep = score_set(&pairs, BleuVariant::Fc).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["variant"], "FC");
        assert_eq!(v["aggregation"], "corpus");
        assert_eq!(v["n_examples"], 1);
        assert!(v.get("per_example").is_none());
        assert_eq!(v["score"].as_f64().unwrap(), round2(rep.score));

        let rep = score_set(&pairs, BleuVariant::Cn).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["per_example"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn empty_set_is_an_error() {
        let none: [ScoredPair<'_, TokenSequence>; 0] = [];
        assert!(score_set(&none, BleuVariant::M2).is_err());
        assert!(score_set(&none, BleuVariant::Sacre).is_err());
    }

    #[test]
    fn order_free_mean_is_exactly_permutation_invariant() {
        let xs = [0.1, 1e16, 0.3, -1e16, 7.7];
        let mut ys = xs;
        ys.reverse();
        assert_eq!(order_free_mean(&xs).to_bits(), order_free_mean(&ys).to_bits());
    }
}
