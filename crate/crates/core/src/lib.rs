//! Sentence vectors learned from paraphrase pairs.
//!
//! An LSTM encoder-decoder is trained to turn one caption of a scene into
//! another caption of the same scene. The encoder's final hidden state is the
//! sentence vector. A second, hierarchical model consumes sequences of those
//! vectors (one per sentence of a paragraph) and generates a one-sentence
//! summary; its top-layer final state is the paragraph vector.
//!
//! Module map:
//!
//! * [`numerics`]: dense tensors, initialization, optimizers, gradient checks
//! * [`text`]: tokenizer, vocabulary, GloVe-format embedding loader
//! * [`datasets`]: caption groups, paraphrase pairs, relatedness and paragraph corpora
//! * [`seq2seq`]: LSTM cell, the paraphrase encoder-decoder, sampled softmax
//! * [`hier`]: chunked two-layer encoder with soft attention and summary decoder
//! * [`eval`]: correlation metrics, relatedness regressor, BLEU, ROUGE-L, CIDEr
//! * [`project`]: PCA projection to 2-D
//! * [`checkpoint`]: on-disk model format
//! * [`cli`]: the `sent2vec` command line
//!
//! See the crate's `examples/` directory for one runnable program per capability.

pub mod checkpoint;
pub mod cli;
pub mod datasets;
pub mod error;
pub mod eval;
pub mod hier;
pub mod numerics;
pub mod project;
pub mod seq2seq;
pub mod text;

pub use error::{Error, Result};
