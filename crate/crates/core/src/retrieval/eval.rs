use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::index::{Bm25Params, Index};
use crate::corpus::{ParallelCorpus, TokenSequence};
use crate::error::Result;
use crate::metrics::{round2, score_set, BleuVariant, ScoreReport, ScoredPair};

/// The comment of the best matching training document, or an empty comment
/// when no document shares a term with the query.
#[derive(Debug, Clone, PartialEq)]
pub struct Generation {
    pub doc: Option<usize>,
    pub score: f64,
    pub comment: TokenSequence,
}

impl Generation {
    pub fn is_fallback(&self) -> bool {
        self.doc.is_none()
    }
}

pub fn ir_generate(index: &Index, code: &str, params: Bm25Params) -> Generation {
    match index.retrieve(code, 1, params).first() {
        Some(hit) => Generation {
            doc: Some(hit.doc),
            score: hit.score,
            comment: index.payloads[hit.doc].clone(),
        },
        None => Generation {
            doc: None,
            score: 0.0,
            comment: TokenSequence::empty(index.payloads[0].tokenizer_id()),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrRow {
    pub id: String,
    /// Id of the retrieved training example.
    pub retrieved_doc: Option<String>,
    pub score: f64,
    pub candidate: String,
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrEvalReport {
    #[serde(flatten)]
    pub report: ScoreReport,
    pub fallbacks: usize,
    #[serde(skip)]
    pub rows: Vec<IrRow>,
}

impl IrEvalReport {
    /// Tab-separated `id, retrieved_doc, score, candidate, reference`.
    pub fn write_tsv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .delimiter(b'\t')
            .quote_style(csv::QuoteStyle::Never)
            .from_writer(w);
        out.write_record(["id", "retrieved_doc", "score", "candidate", "reference"])?;
        for r in &self.rows {
            out.write_record([
                r.id.as_str(),
                r.retrieved_doc.as_deref().unwrap_or(""),
                &format!("{:.4}", r.score),
                &r.candidate,
                &r.reference,
            ])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Uses each test source as a query and scores the retrieved comments
/// against the test references.
pub fn ir_eval(index: &Index, test: &ParallelCorpus, variant: BleuVariant, params: Bm25Params) -> Result<IrEvalReport> {
    let generated: Vec<Generation> = test
        .examples()
        .par_iter()
        .map(|ex| ir_generate(index, &ex.source.joined(), params))
        .collect();
    let refs: Vec<&[TokenSequence]> = test
        .examples()
        .iter()
        .map(|ex| std::slice::from_ref(&ex.target))
        .collect();
    let pairs: Vec<ScoredPair<'_, TokenSequence>> = generated
        .iter()
        .zip(&refs)
        .map(|(g, r)| ScoredPair::new(g.comment.tokens(), r))
        .collect();
    let report = score_set(&pairs, variant)?;
    let rows = test
        .examples()
        .iter()
        .zip(&generated)
        .map(|(ex, g)| IrRow {
            id: ex.id.clone(),
            retrieved_doc: g.doc.map(|d| index.ids[d].clone()),
            score: g.score,
            candidate: g.comment.joined(),
            reference: ex.target.joined(),
        })
        .collect();
    Ok(IrEvalReport {
        report,
        fallbacks: generated.iter().filter(|g| g.is_fallback()).count(),
        rows,
    })
}

impl IrEvalReport {
    pub fn rounded_score(&self) -> f64 {
        round2(self.report.score)
    }
}
