//! Hierarchical paragraph encoder and summary decoder.
//!
//! A paragraph arrives as up to [`T_MAX`] sentence vectors, zero-padded at
//! the end. The slots are cut into windows of `chunk_size` starting every
//! `stride` slots. A first LSTM runs over each window and its last hidden
//! state becomes the chunk feature. A second LSTM reads the chunk features
//! in order; at every step it also receives an attention summary over all
//! chunk features. Its final hidden state is the paragraph vector. The
//! summary decoder starts from a projection of that vector and attends over
//! the second layer's states while emitting words.
//!
//! Padding is neutral: padded slots are skipped by the first layer, and
//! chunks holding no real sentence are left out of the second layer and of
//! both attentions.

mod attention;
mod chunk;
mod model;
mod train;

pub use attention::{AttentionCache, AttentionParams};
pub use chunk::{chunk, chunk_windows, true_length};
pub use model::{HierConfig, HierModel, ParagraphEncoding, ParagraphVec, T_MAX};
pub use train::{sentence_vectors, HierTrainOptions, HierTrainer, SummaryExample, SummaryLoss};
