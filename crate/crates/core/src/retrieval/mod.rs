//! BM25 retrieval baseline: the comment of the nearest training code is
//! returned as the generated comment.

mod analyzer;
mod eval;
mod index;
mod snapshot;

pub use analyzer::AnalyzerConfig;
pub use eval::{ir_eval, ir_generate, Generation, IrEvalReport, IrRow};
pub use index::{build_index, Bm25Params, Hit, Index, Posting};
