//! The paraphrase encoder-decoder.
//!
//! An LSTM encoder reads a caption (optionally reversed) and its final
//! hidden state is the sentence vector. A second LSTM, started from the
//! encoder's final hidden and cell state and fed nothing else but its own
//! previous tokens, generates a paraphrase. There is no attention from
//! decoder to encoder: every bit of information about the source has to
//! pass through the sentence vector.

mod lstm;
mod model;
mod sampler;
mod train;

pub use lstm::{lstm_step, LstmParams, LstmStep};
pub use model::{EncoderDecoderModel, Seq2SeqConfig, SentVec};
pub use sampler::{CandidateSet, LogUniformSampler};
pub use train::{
    candidate_softmax_loss, LogRecord, LossMode, Seq2SeqTrainer, TrainExample, TrainOptions,
};
