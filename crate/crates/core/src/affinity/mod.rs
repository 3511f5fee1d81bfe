//! Affinity groups of Java methods: pairs of documented methods from
//! different projects, the same project, or the same class, scored against
//! each other to calibrate what a BLEU value means.

mod extract;
mod filter;
mod java;
mod report;
mod sample;

pub use extract::{
    extract_from_source, extract_methods, read_records_jsonl, write_records_jsonl, ExtractOptions, ExtractReport,
    MethodRecord,
};
pub use filter::{filter_records, is_getter_or_setter};
pub use java::{doc_summary, scan_java, ScanResult, ScannedMethod};
pub use report::{affinity_report, quantile, AffinityReport, VariantSummary};
pub use sample::{
    check_sample, sample_pairs, AffinityGroupKind, PairSample, SampleOptions, DEFAULT_MAX_PER_CLASS, DEFAULT_PAIR_COUNT,
};
