//! Corpus-level analyses: how repetitive the comments are (Zipf tables and
//! frequent n-gram ablation) and whether similar inputs map to similar
//! outputs (bivariate similarity sampling with Spearman correlation).

mod ablation;
mod bivariate;
mod hexbin;
mod stats;
mod zipf;

pub use ablation::{ablation_curve, AblationCurve, AblationPoint};
pub use bivariate::{
    dependence_report, sample_bivariate, BivariateSample, CorrelationResult, SimPair, DEFAULT_EPSILON,
};
pub use hexbin::{hexbin, HexCell, HexGrid};
pub use stats::{average_ranks, bh_adjust, spearman, Spearman};
pub use zipf::{zipf_slope, zipf_table, ZipfRow, ZipfTable};
