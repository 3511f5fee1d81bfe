//! RFC 4180 CSV tables for every analysis output.

use std::io::Write;

use crate::affinity::AffinityReport;
use crate::analysis::{AblationCurve, BivariateSample, HexGrid, ZipfTable};
use crate::error::Result;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(w)
}

fn done<W: Write>(mut out: csv::Writer<W>) -> Result<()> {
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `rank,ngram,count,rel_freq` with the n-gram's tokens joined by spaces.
pub fn write_zipf_csv<W: Write>(table: &ZipfTable, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["rank", "ngram", "count", "rel_freq"])?;
    for (i, row) in table.rows.iter().enumerate() {
        out.write_record([
            (i + 1).to_string(),
            row.ngram.join(" "),
            row.count.to_string(),
            row.rel_freq.to_string(),
        ])?;
    }
    done(out)
}

pub fn write_ablation_csv<W: Write>(curve: &AblationCurve, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["k", "bleu"])?;
    for p in &curve.points {
        out.write_record([p.k.to_string(), p.bleu.to_string()])?;
    }
    done(out)
}

pub fn write_bivariate_csv<W: Write>(sample: &BivariateSample, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["in_sim", "out_sim"])?;
    for p in &sample.pairs {
        out.write_record([p.in_sim.to_string(), p.out_sim.to_string()])?;
    }
    done(out)
}

pub fn write_hexbin_csv<W: Write>(grid: &HexGrid, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["x", "y", "count"])?;
    for c in &grid.cells {
        out.write_record([c.x.to_string(), c.y.to_string(), c.count.to_string()])?;
    }
    done(out)
}

/// Long format: `kind,pair,variant,score`, one row per pair and variant.
pub fn write_affinity_scores_csv<W: Write>(reports: &[AffinityReport], w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["kind", "pair", "variant", "score"])?;
    for r in reports {
        for v in &r.variants {
            for (i, s) in v.scores.iter().enumerate() {
                out.write_record([r.kind.as_str(), &i.to_string(), v.variant.name(), &s.to_string()])?;
            }
        }
    }
    done(out)
}
