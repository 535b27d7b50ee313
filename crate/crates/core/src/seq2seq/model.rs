use crate::numerics::{
    argmax, derive_seed, init_params, prefixed, prefixed_mut, InitScheme, Params, Scalar, Tensor2,
};
use crate::text::{tokenize, EmbeddingTable, Vocabulary, BOS, EOS, PAD, UNK};
use crate::{Error, Result};

use super::lstm::{LstmParams, LstmStep};

#[derive(Debug, Clone, PartialEq)]
pub struct Seq2SeqConfig {
    pub vocab_size: usize,
    /// Word embedding width.
    pub d_w: usize,
    /// Hidden width of encoder and decoder; also the sentence-vector width.
    pub d_h: usize,
    /// Feed the encoder the source tokens last-to-first.
    pub reverse_encoder_input: bool,
    /// Longest source sentence and most decoder steps.
    pub max_len: usize,
    /// Keep word embeddings fixed during training.
    pub freeze_embeddings: bool,
}

impl Seq2SeqConfig {
    /// 300 hidden units, 20k words, 300-wide embeddings.
    pub fn new(vocab_size: usize) -> Self {
        Self {
            vocab_size,
            d_w: 300,
            d_h: 300,
            reverse_encoder_input: true,
            max_len: 30,
            freeze_embeddings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.vocab_size < 5 {
            return Err(Error::invalid("vocabulary needs at least one non-special token"));
        }
        if self.d_w == 0 || self.d_h == 0 || self.max_len == 0 {
            return Err(Error::invalid("d_w, d_h and max_len must be positive"));
        }
        Ok(())
    }

    pub fn to_pairs(&self) -> Vec<(String, String)> {
        vec![
            ("vocab_size".into(), self.vocab_size.to_string()),
            ("d_w".into(), self.d_w.to_string()),
            ("d_h".into(), self.d_h.to_string()),
            ("reverse_encoder_input".into(), self.reverse_encoder_input.to_string()),
            ("max_len".into(), self.max_len.to_string()),
            ("freeze_embeddings".into(), self.freeze_embeddings.to_string()),
        ]
    }

    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let get = |k: &str| -> Result<&str> {
            pairs
                .iter()
                .find(|(key, _)| key == k)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Format(format!("missing config key {k}")))
        };
        let num = |k: &str| -> Result<usize> {
            get(k)?.parse().map_err(|_| Error::Format(format!("bad value for {k}")))
        };
        let flag = |k: &str| -> Result<bool> {
            get(k)?.parse().map_err(|_| Error::Format(format!("bad value for {k}")))
        };
        let cfg = Self {
            vocab_size: num("vocab_size")?,
            d_w: num("d_w")?,
            d_h: num("d_h")?,
            reverse_encoder_input: flag("reverse_encoder_input")?,
            max_len: num("max_len")?,
            freeze_embeddings: flag("freeze_embeddings")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A sentence vector: the encoder's final hidden state.
#[derive(Debug, Clone, PartialEq)]
pub struct SentVec<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> SentVec<T> {
    pub fn width(&self) -> usize {
        self.values.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncoderDecoderModel<T> {
    pub config: Seq2SeqConfig,
    /// Shared by encoder and decoder.
    pub embedding: EmbeddingTable<T>,
    pub encoder: LstmParams<T>,
    pub decoder: LstmParams<T>,
    /// `|V| x d_h`: row `v` scores word `v`.
    pub proj_w: Tensor2<T>,
    pub proj_b: Tensor2<T>,
}

impl<T: Scalar> EncoderDecoderModel<T> {
    pub fn new(config: Seq2SeqConfig, seed: u64) -> Result<Self> {
        let embedding = EmbeddingTable::random(config.vocab_size, config.d_w, derive_seed(seed, 0));
        Self::with_embeddings(config, embedding, seed)
    }

    pub fn with_embeddings(config: Seq2SeqConfig, embedding: EmbeddingTable<T>, seed: u64) -> Result<Self> {
        config.validate()?;
        if embedding.vocab_size() != config.vocab_size || embedding.width() != config.d_w {
            return Err(Error::shape(
                format!("{}x{} embedding", config.vocab_size, config.d_w),
                format!("{}x{}", embedding.vocab_size(), embedding.width()),
            ));
        }
        Ok(Self {
            encoder: LstmParams::new(config.d_w, config.d_h, derive_seed(seed, 1)),
            decoder: LstmParams::new(config.d_w, config.d_h, derive_seed(seed, 2)),
            proj_w: init_params(config.vocab_size, config.d_h, InitScheme::UniformScaled, derive_seed(seed, 3)),
            proj_b: Tensor2::zeros(1, config.vocab_size),
            embedding,
            config,
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.config.vocab_size
    }

    pub fn hidden_width(&self) -> usize {
        self.config.d_h
    }

    pub(crate) fn check_source(&self, ids: &[usize]) -> Result<()> {
        if ids.is_empty() {
            return Err(Error::Empty("source sentence"));
        }
        if ids.len() > self.config.max_len {
            return Err(Error::invalid(format!(
                "source has {} tokens, max_len is {}",
                ids.len(),
                self.config.max_len
            )));
        }
        for &id in ids {
            if id == PAD {
                return Err(Error::invalid("PAD in encoder input"));
            }
            if id >= self.config.vocab_size {
                return Err(Error::invalid(format!("token id {id} outside vocabulary")));
            }
        }
        Ok(())
    }

    /// Source ids in the order the encoder consumes them.
    pub(crate) fn encoder_order(&self, ids: &[usize]) -> Vec<usize> {
        if self.config.reverse_encoder_input {
            ids.iter().rev().copied().collect()
        } else {
            ids.to_vec()
        }
    }

    /// Encoder forward pass, keeping every step for backprop.
    pub(crate) fn encode_steps(&self, ids: &[usize]) -> Result<Vec<LstmStep<T>>> {
        self.check_source(ids)?;
        let d_h = self.config.d_h;
        let mut steps: Vec<LstmStep<T>> = Vec::with_capacity(ids.len());
        let zero = vec![T::zero(); d_h];
        for id in self.encoder_order(ids) {
            let x = self.embedding.row(id);
            let step = match steps.last() {
                Some(prev) => self.encoder.forward(x, &prev.h, &prev.c),
                None => self.encoder.forward(x, &zero, &zero),
            };
            steps.push(step);
        }
        Ok(steps)
    }

    /// Final `(h, c)` of the encoder.
    pub fn encode_state(&self, ids: &[usize]) -> Result<(Vec<T>, Vec<T>)> {
        self.check_source(ids)?;
        let d_h = self.config.d_h;
        let mut h = vec![T::zero(); d_h];
        let mut c = vec![T::zero(); d_h];
        for id in self.encoder_order(ids) {
            let s = self.encoder.forward(self.embedding.row(id), &h, &c);
            h = s.h;
            c = s.c;
        }
        Ok((h, c))
    }

    /// The sentence vector `h_T` of `ids`.
    pub fn encode(&self, ids: &[usize]) -> Result<SentVec<T>> {
        let (h, _) = self.encode_state(ids)?;
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sentence vector".into()));
        }
        Ok(SentVec { values: h })
    }

    /// Tokenize, map to ids and encode raw text. Text with no tokens is
    /// encoded as `[UNK]`; longer text is cut at `max_len` tokens.
    pub fn encode_text(&self, vocab: &Vocabulary, text: &str) -> Result<SentVec<T>> {
        if vocab.len() != self.config.vocab_size {
            return Err(Error::Mismatch(format!(
                "vocabulary has {} entries, model {}",
                vocab.len(),
                self.config.vocab_size
            )));
        }
        let mut ids = vocab.encode(&tokenize(text));
        if ids.is_empty() {
            ids.push(UNK);
        }
        ids.truncate(self.config.max_len);
        self.encode(&ids)
    }

    /// Full output logits for decoder hidden state `h`.
    pub fn logits(&self, h: &[T]) -> Vec<T> {
        let mut out = self.proj_b.data().to_vec();
        self.proj_w.matvec_acc(h, &mut out);
        out
    }

    /// Greedy decoding from BOS. Stops at EOS (not returned) or after
    /// `max_len` tokens. PAD, BOS and UNK are never emitted.
    pub fn generate(&self, source: &[usize], max_len: usize) -> Result<Vec<usize>> {
        let (mut h, mut c) = self.encode_state(source)?;
        let mut out = Vec::new();
        let mut prev = BOS;
        while out.len() < max_len {
            let s = self.decoder.forward(self.embedding.row(prev), &h, &c);
            h = s.h;
            c = s.c;
            let mut logits = self.logits(&h);
            for banned in [PAD, BOS, UNK] {
                logits[banned] = T::neg_infinity();
            }
            let next = argmax(&logits);
            if next == EOS {
                break;
            }
            out.push(next);
            prev = next;
        }
        Ok(out)
    }

    pub fn cast<U: Scalar>(&self) -> EncoderDecoderModel<U> {
        let cast_lstm = |p: &LstmParams<T>| LstmParams {
            w: p.w.cast(),
            u: p.u.cast(),
            b: p.b.cast(),
        };
        EncoderDecoderModel {
            config: self.config.clone(),
            embedding: EmbeddingTable {
                matrix: self.embedding.matrix.cast(),
            },
            encoder: cast_lstm(&self.encoder),
            decoder: cast_lstm(&self.decoder),
            proj_w: self.proj_w.cast(),
            proj_b: self.proj_b.cast(),
        }
    }
}

impl<T: Scalar> Params<T> for EncoderDecoderModel<T> {
    fn tensors(&self) -> Vec<(String, &Tensor2<T>)> {
        let mut v = vec![("embedding".to_string(), &self.embedding.matrix)];
        v.extend(prefixed("encoder", self.encoder.tensors()));
        v.extend(prefixed("decoder", self.decoder.tensors()));
        v.push(("proj.w".into(), &self.proj_w));
        v.push(("proj.b".into(), &self.proj_b));
        v
    }

    fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor2<T>)> {
        let mut v = vec![("embedding".to_string(), &mut self.embedding.matrix)];
        v.extend(prefixed_mut("encoder", self.encoder.tensors_mut()));
        v.extend(prefixed_mut("decoder", self.decoder.tensors_mut()));
        v.push(("proj.w".into(), &mut self.proj_w));
        v.push(("proj.b".into(), &mut self.proj_b));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(reverse: bool) -> EncoderDecoderModel<f64> {
        let mut cfg = Seq2SeqConfig::new(12);
        cfg.d_w = 4;
        cfg.d_h = 5;
        cfg.reverse_encoder_input = reverse;
        EncoderDecoderModel::new(cfg, 3).unwrap()
    }

    #[test]
    fn one_token_is_one_step() {
        let m = tiny(false);
        let v = m.encode(&[6]).unwrap();
        let step = m.encoder.forward(m.embedding.row(6), &[0.0; 5], &[0.0; 5]);
        assert_eq!(v.values, step.h);
    }

    #[test]
    fn palindrome_unaffected_by_reversal() {
        let ids = [5, 7, 9, 7, 5];
        let a = tiny(false).encode(&ids).unwrap();
        let b = tiny(true).encode(&ids).unwrap();
        assert_eq!(a, b);
        let c = tiny(true).encode(&[5, 7, 9]).unwrap();
        let d = tiny(false).encode(&[9, 7, 5]).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn deterministic() {
        let m = tiny(true);
        assert_eq!(m.encode(&[4, 8, 10]).unwrap(), m.encode(&[4, 8, 10]).unwrap());
    }

    #[test]
    fn encoder_input_errors() {
        let m = tiny(true);
        assert!(matches!(m.encode(&[]), Err(Error::Empty(_))));
        assert!(m.encode(&[4, PAD]).is_err());
        assert!(m.encode(&[99]).is_err());
        assert!(m.encode(&vec![4; 31]).is_err());
    }

    #[test]
    fn generation_rules() {
        let m = tiny(true);
        assert!(m.generate(&[4, 5], 1).unwrap().len() <= 1);
        let out = m.generate(&[4, 5, 6], 20).unwrap();
        assert!(out.iter().all(|&t| t != PAD && t != UNK && t != BOS && t != EOS));
    }

    #[test]
    fn config_round_trip() {
        let cfg = tiny(true).config;
        assert_eq!(Seq2SeqConfig::from_pairs(&cfg.to_pairs()).unwrap(), cfg);
    }
}
