//! Quality index and homogeneity test, rank correlations, AUROC.

mod quality;
mod rank;
mod roc;

pub use quality::{
    critical_value, depths_of, homogeneity_test, null_standard_error, quality_index, two_sided_p_value,
    HomogeneityOutcome, QualityIndexResult,
};
pub use rank::{kendall_tau, rank_correlations, spearman, RankCorrelationResult};
pub use roc::{auroc, RocResult};
