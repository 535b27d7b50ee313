//! Tokenization, vocabularies and pre-trained word vectors.

mod embeddings;
mod tokenize;
mod vocab;

pub use embeddings::{load_embeddings, EmbeddingTable};
pub use tokenize::{detokenize, tokenize};
pub use vocab::{build_vocab, Vocabulary, BOS, EOS, NUM_SPECIALS, PAD, SPECIAL_TOKENS, UNK};
