//! Relatedness correlation (Pearson, Spearman, MSE), the relatedness
//! regressor and distance check, and caption metrics (BLEU, ROUGE-L, CIDEr).
//!
//! Caption metrics take pre-tokenized text. UNK is an ordinary token here.

mod caption;
mod correlation;
mod regressor;
mod report;

pub use caption::{bleu, cider, rouge_l, ROUGE_BETA};
pub use correlation::{mse, pearson, ranks, spearman};
pub use regressor::{
    distance_relatedness_check, encode_pairs, sparse_target, EncodedPair, RegressorOptions,
    RelatednessRegressor, SCORE_SUPPORT,
};
pub use report::{MetricReport, RelatednessScores, SummaryScores};
