use crate::numerics::{
    argmax, derive_seed, init_params, prefixed, prefixed_mut, InitScheme, Params, Scalar, Tensor2,
};
use crate::seq2seq::{LstmParams, LstmStep};
use crate::text::{BOS, EOS, PAD, UNK};
use crate::{Error, Result};

use super::attention::{AttentionCache, AttentionParams};
use super::chunk::{chunk_windows, true_length};

/// Sentence slots per paragraph.
pub const T_MAX: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct HierConfig {
    /// Sentence-vector width.
    pub d_in: usize,
    /// First-layer (chunk) LSTM width.
    pub d_chunk: usize,
    /// Second-layer LSTM width; the paragraph-vector width.
    pub d_para: usize,
    pub d_attn: usize,
    /// Summary decoder width.
    pub d_dec: usize,
    /// Summary word-embedding width.
    pub d_emb: usize,
    pub vocab_size: usize,
    pub chunk_size: usize,
    pub stride: usize,
    pub max_len: usize,
}

impl HierConfig {
    /// 1024-unit encoder layers, 256-unit decoder, chunks of 5 every 5 slots.
    pub fn new(d_in: usize, vocab_size: usize) -> Self {
        Self {
            d_in,
            d_chunk: 1024,
            d_para: 1024,
            d_attn: 256,
            d_dec: 256,
            d_emb: 256,
            vocab_size,
            chunk_size: 5,
            stride: 5,
            max_len: 30,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dims = [self.d_in, self.d_chunk, self.d_para, self.d_attn, self.d_dec, self.d_emb, self.max_len];
        if dims.contains(&0) {
            return Err(Error::invalid("hierarchical model widths must be positive"));
        }
        if self.chunk_size == 0 || self.stride == 0 {
            return Err(Error::invalid("chunk size and stride must be at least 1"));
        }
        if self.chunk_size < self.stride {
            return Err(Error::invalid(format!(
                "chunk size {} below stride {} leaves sentences uncovered",
                self.chunk_size, self.stride
            )));
        }
        if self.vocab_size < 5 {
            return Err(Error::invalid("summary vocabulary needs at least one word"));
        }
        Ok(())
    }

    pub fn to_pairs(&self) -> Vec<(String, String)> {
        [
            ("d_in", self.d_in),
            ("d_chunk", self.d_chunk),
            ("d_para", self.d_para),
            ("d_attn", self.d_attn),
            ("d_dec", self.d_dec),
            ("d_emb", self.d_emb),
            ("vocab_size", self.vocab_size),
            ("chunk_size", self.chunk_size),
            ("stride", self.stride),
            ("max_len", self.max_len),
            ("t_max", T_MAX),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
    }

    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let num = |k: &str| -> Result<usize> {
            pairs
                .iter()
                .find(|(key, _)| key == k)
                .ok_or_else(|| Error::Format(format!("missing config key {k}")))?
                .1
                .parse()
                .map_err(|_| Error::Format(format!("bad value for {k}")))
        };
        if num("t_max")? != T_MAX {
            return Err(Error::Format("t_max differs from this build".into()));
        }
        let cfg = Self {
            d_in: num("d_in")?,
            d_chunk: num("d_chunk")?,
            d_para: num("d_para")?,
            d_attn: num("d_attn")?,
            d_dec: num("d_dec")?,
            d_emb: num("d_emb")?,
            vocab_size: num("vocab_size")?,
            chunk_size: num("chunk_size")?,
            stride: num("stride")?,
            max_len: num("max_len")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Final second-layer hidden state.
#[derive(Debug, Clone, PartialEq)]
pub struct ParagraphVec<T> {
    pub values: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierModel<T> {
    pub config: HierConfig,
    pub layer1: LstmParams<T>,
    /// Attention over chunk features, queried by the second layer.
    pub chunk_attn: AttentionParams<T>,
    pub layer2: LstmParams<T>,
    /// Paragraph vector → initial decoder hidden state.
    pub init_w: Tensor2<T>,
    pub init_b: Tensor2<T>,
    pub embedding: Tensor2<T>,
    /// Attention over second-layer states, queried by the decoder.
    pub dec_attn: AttentionParams<T>,
    pub decoder: LstmParams<T>,
    pub out_w: Tensor2<T>,
    pub out_b: Tensor2<T>,
}

/// Output of the encoder, with the intermediate values training needs.
#[derive(Debug, Clone)]
pub struct ParagraphEncoding<T> {
    pub paragraph_vec: ParagraphVec<T>,
    /// Second-layer hidden state after each non-empty chunk.
    pub states: Vec<Vec<T>>,
    /// Attention weights over chunk features at each second-layer step.
    pub chunk_weights: Vec<Vec<T>>,
    pub(crate) cache: EncodeCache<T>,
}

#[derive(Debug, Clone)]
pub(crate) struct EncodeCache<T> {
    /// Slot indices consumed by each non-empty chunk, and its first-layer steps.
    pub chunks: Vec<(Vec<usize>, Vec<LstmStep<T>>)>,
    pub features: Vec<Vec<T>>,
    pub l2_steps: Vec<LstmStep<T>>,
    pub l2_attn: Vec<AttentionCache<T>>,
}

impl<T: Scalar> HierModel<T> {
    pub fn new(config: HierConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let c = &config;
        let mut embedding =
            init_params(c.vocab_size, c.d_emb, InitScheme::UniformScaled, derive_seed(seed, 5));
        embedding.row_mut(PAD).fill(T::zero());
        Ok(Self {
            layer1: LstmParams::new(c.d_in, c.d_chunk, derive_seed(seed, 1)),
            chunk_attn: AttentionParams::new(c.d_para, c.d_chunk, c.d_attn, derive_seed(seed, 2)),
            layer2: LstmParams::new(2 * c.d_chunk, c.d_para, derive_seed(seed, 3)),
            init_w: init_params(c.d_dec, c.d_para, InitScheme::UniformScaled, derive_seed(seed, 4)),
            init_b: Tensor2::zeros(1, c.d_dec),
            embedding,
            dec_attn: AttentionParams::new(c.d_dec, c.d_para, c.d_attn, derive_seed(seed, 6)),
            decoder: LstmParams::new(c.d_emb + c.d_para, c.d_dec, derive_seed(seed, 7)),
            out_w: init_params(c.vocab_size, c.d_dec, InitScheme::UniformScaled, derive_seed(seed, 8)),
            out_b: Tensor2::zeros(1, c.vocab_size),
            config,
        })
    }

    /// Run both encoder layers. Trailing all-zero vectors are padding.
    pub fn encode_paragraph(&self, sent_vecs: &[Vec<T>]) -> Result<ParagraphEncoding<T>> {
        let c = &self.config;
        if sent_vecs.len() > T_MAX {
            return Err(Error::invalid(format!("{} sentences exceed {T_MAX} slots", sent_vecs.len())));
        }
        if let Some(v) = sent_vecs.iter().find(|v| v.len() != c.d_in) {
            return Err(Error::shape(c.d_in, v.len()));
        }
        if sent_vecs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sentence vectors".into()));
        }
        let len = true_length(sent_vecs);
        if len == 0 {
            return Err(Error::Empty("paragraph"));
        }

        let zero1 = vec![T::zero(); c.d_chunk];
        let mut chunks = Vec::new();
        let mut features = Vec::new();
        for window in chunk_windows(T_MAX, c.chunk_size, c.stride) {
            let slots: Vec<usize> = window.filter(|&i| i < len).collect();
            if slots.is_empty() {
                continue;
            }
            let mut steps: Vec<LstmStep<T>> = Vec::with_capacity(slots.len());
            for &i in &slots {
                let step = match steps.last() {
                    Some(p) => self.layer1.forward(&sent_vecs[i], &p.h, &p.c),
                    None => self.layer1.forward(&sent_vecs[i], &zero1, &zero1),
                };
                steps.push(step);
            }
            features.push(steps.last().expect("non-empty chunk").h.clone());
            chunks.push((slots, steps));
        }

        let zero2 = vec![T::zero(); c.d_para];
        let mut l2_steps: Vec<LstmStep<T>> = Vec::with_capacity(features.len());
        let mut l2_attn = Vec::with_capacity(features.len());
        for f in &features {
            let (h, cc) = match l2_steps.last() {
                Some(p) => (p.h.as_slice(), p.c.as_slice()),
                None => (zero2.as_slice(), zero2.as_slice()),
            };
            let att = self.chunk_attn.forward(h, &features);
            let mut x = f.clone();
            x.extend_from_slice(&att.context);
            let step = self.layer2.forward(&x, h, cc);
            l2_steps.push(step);
            l2_attn.push(att);
        }
        let states: Vec<Vec<T>> = l2_steps.iter().map(|s| s.h.clone()).collect();
        Ok(ParagraphEncoding {
            paragraph_vec: ParagraphVec {
                values: states.last().expect("non-empty paragraph").clone(),
            },
            chunk_weights: l2_attn.iter().map(|a| a.weights.clone()).collect(),
            states,
            cache: EncodeCache {
                chunks,
                features,
                l2_steps,
                l2_attn,
            },
        })
    }

    pub(crate) fn initial_decoder_state(&self, p: &[T]) -> Vec<T> {
        let mut h = self.init_b.data().to_vec();
        self.init_w.matvec_acc(p, &mut h);
        h.iter_mut().for_each(|v| *v = v.tanh());
        h
    }

    pub(crate) fn decoder_input(&self, token: usize, context: &[T]) -> Vec<T> {
        let mut x = self.embedding.row(token).to_vec();
        x.extend_from_slice(context);
        x
    }

    pub fn logits(&self, h: &[T]) -> Vec<T> {
        let mut out = self.out_b.data().to_vec();
        self.out_w.matvec_acc(h, &mut out);
        out
    }

    /// Greedy summary; EOS ends it and is not returned. PAD, BOS and UNK are never emitted.
    pub fn summarize(&self, sent_vecs: &[Vec<T>], max_len: usize) -> Result<Vec<usize>> {
        let enc = self.encode_paragraph(sent_vecs)?;
        let mut h = self.initial_decoder_state(&enc.paragraph_vec.values);
        let mut c = vec![T::zero(); self.config.d_dec];
        let mut prev = BOS;
        let mut out = Vec::new();
        while out.len() < max_len {
            let att = self.dec_attn.forward(&h, &enc.states);
            let s = self.decoder.forward(&self.decoder_input(prev, &att.context), &h, &c);
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

    pub fn cast<U: Scalar>(&self) -> HierModel<U> {
        let mut out = HierModel::<U>::new(self.config.clone(), 0).expect("validated config");
        for ((_, dst), (_, src)) in out.tensors_mut().into_iter().zip(self.tensors()) {
            *dst = src.cast();
        }
        out
    }
}

impl<T: Scalar> Params<T> for HierModel<T> {
    fn tensors(&self) -> Vec<(String, &Tensor2<T>)> {
        let mut v = Vec::new();
        v.extend(prefixed("layer1", self.layer1.tensors()));
        v.extend(prefixed("chunk_attn", self.chunk_attn.tensors()));
        v.extend(prefixed("layer2", self.layer2.tensors()));
        v.push(("init.w".into(), &self.init_w));
        v.push(("init.b".into(), &self.init_b));
        v.push(("embedding".into(), &self.embedding));
        v.extend(prefixed("dec_attn", self.dec_attn.tensors()));
        v.extend(prefixed("decoder", self.decoder.tensors()));
        v.push(("out.w".into(), &self.out_w));
        v.push(("out.b".into(), &self.out_b));
        v
    }

    fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor2<T>)> {
        let mut v = Vec::new();
        v.extend(prefixed_mut("layer1", self.layer1.tensors_mut()));
        v.extend(prefixed_mut("chunk_attn", self.chunk_attn.tensors_mut()));
        v.extend(prefixed_mut("layer2", self.layer2.tensors_mut()));
        v.push(("init.w".into(), &mut self.init_w));
        v.push(("init.b".into(), &mut self.init_b));
        v.push(("embedding".into(), &mut self.embedding));
        v.extend(prefixed_mut("dec_attn", self.dec_attn.tensors_mut()));
        v.extend(prefixed_mut("decoder", self.decoder.tensors_mut()));
        v.push(("out.w".into(), &mut self.out_w));
        v.push(("out.b".into(), &mut self.out_b));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tiny_config() -> HierConfig {
        HierConfig {
            d_in: 3,
            d_chunk: 4,
            d_para: 4,
            d_attn: 3,
            d_dec: 3,
            d_emb: 2,
            vocab_size: 8,
            chunk_size: 5,
            stride: 5,
            max_len: 10,
        }
    }

    fn vecs(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| (0..3).map(|j| ((i * 3 + j) as f64 * 0.37).sin()).collect())
            .collect()
    }

    #[test]
    fn padding_is_neutral() {
        let m = HierModel::<f64>::new(tiny_config(), 1).unwrap();
        let short = vecs(3);
        let mut padded = short.clone();
        padded.resize(T_MAX, vec![0.0; 3]);
        let a = m.encode_paragraph(&short).unwrap();
        let b = m.encode_paragraph(&padded).unwrap();
        assert_eq!(a.paragraph_vec, b.paragraph_vec);
        assert_eq!(a.states.len(), 1);
    }

    #[test]
    fn single_sentence_deterministic() {
        let m = HierModel::<f64>::new(tiny_config(), 1).unwrap();
        let v = vecs(1);
        assert_eq!(m.encode_paragraph(&v).unwrap().paragraph_vec, m.encode_paragraph(&v).unwrap().paragraph_vec);
        assert_eq!(m.encode_paragraph(&v).unwrap().paragraph_vec.values.len(), 4);
    }

    #[test]
    fn errors() {
        let m = HierModel::<f64>::new(tiny_config(), 1).unwrap();
        assert!(matches!(m.encode_paragraph(&[]), Err(Error::Empty(_))));
        assert!(matches!(m.encode_paragraph(&[vec![0.0; 3]]), Err(Error::Empty(_))));
        assert!(m.encode_paragraph(&vecs(21)).is_err());
        assert!(m.encode_paragraph(&[vec![1.0; 2]]).is_err());
    }

    #[test]
    fn chunk_attention_weights_normalized() {
        let m = HierModel::<f64>::new(tiny_config(), 2).unwrap();
        let e = m.encode_paragraph(&vecs(17)).unwrap();
        assert_eq!(e.chunk_weights.len(), 4);
        for w in &e.chunk_weights {
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn summarize_respects_limits() {
        let m = HierModel::<f64>::new(tiny_config(), 2).unwrap();
        assert!(m.summarize(&vecs(4), 1).unwrap().len() <= 1);
        let s = m.summarize(&vecs(4), 10).unwrap();
        assert!(s.iter().all(|&t| t != PAD && t != UNK && t != BOS));
        assert_eq!(s, m.summarize(&vecs(4), 10).unwrap());
    }

    #[test]
    fn config_checks() {
        let mut c = tiny_config();
        c.chunk_size = 2;
        c.stride = 3;
        assert!(c.validate().is_err());
        let c = tiny_config();
        assert_eq!(HierConfig::from_pairs(&c.to_pairs()).unwrap(), c);
    }
}
