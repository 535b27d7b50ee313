use std::collections::BTreeMap;

use crate::checkpoint::{format_key_values, parse_key_values};
use crate::hier::HierConfig;
use crate::numerics::OptimKind;
use crate::seq2seq::Seq2SeqConfig;
use crate::{Error, Result};

/// Every tunable of a run. Stored in each checkpoint under `run.` keys.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub vocab_size: usize,
    pub d_w: usize,
    pub d_h: usize,
    pub max_len: usize,
    /// 0 means full softmax.
    pub n_samples: usize,
    pub batch_size: usize,
    pub optimizer: OptimKind,
    pub lr: f64,
    pub decay: f64,
    pub epochs: usize,
    /// 0 means no limit.
    pub max_steps: u64,
    pub clip_norm: f64,
    pub reverse_encoder_input: bool,
    pub freeze_embeddings: bool,
    pub chunk_size: usize,
    pub stride: usize,
    pub d_chunk: usize,
    pub d_para: usize,
    pub d_attn: usize,
    pub d_dec: usize,
    pub d_emb: usize,
    /// Named input and output files.
    pub paths: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = Seq2SeqConfig::new(20_000);
        let h = HierConfig::new(s.d_h, 20_000);
        Self {
            command: String::new(),
            seed: 0,
            vocab_size: s.vocab_size,
            d_w: s.d_w,
            d_h: s.d_h,
            max_len: s.max_len,
            n_samples: 512,
            batch_size: 64,
            optimizer: OptimKind::SgdDecay,
            lr: 0.0005,
            decay: 0.99,
            epochs: 1,
            max_steps: 0,
            clip_norm: 5.0,
            reverse_encoder_input: true,
            freeze_embeddings: false,
            chunk_size: h.chunk_size,
            stride: h.stride,
            d_chunk: h.d_chunk,
            d_para: h.d_para,
            d_attn: h.d_attn,
            d_dec: h.d_dec,
            d_emb: h.d_emb,
            paths: BTreeMap::new(),
        }
    }
}

fn optim_name(k: OptimKind) -> &'static str {
    match k {
        OptimKind::SgdDecay => "sgd",
        OptimKind::Adam => "adam",
    }
}

pub(crate) fn parse_optim(s: &str) -> Result<OptimKind> {
    match s {
        "sgd" => Ok(OptimKind::SgdDecay),
        "adam" => Ok(OptimKind::Adam),
        _ => Err(Error::invalid(format!("unknown optimizer {s:?}"))),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("vocab_size", self.vocab_size),
            ("d_w", self.d_w),
            ("d_h", self.d_h),
            ("max_len", self.max_len),
            ("batch_size", self.batch_size),
            ("epochs", self.epochs),
            ("chunk_size", self.chunk_size),
            ("stride", self.stride),
            ("d_chunk", self.d_chunk),
            ("d_para", self.d_para),
            ("d_attn", self.d_attn),
            ("d_dec", self.d_dec),
            ("d_emb", self.d_emb),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::invalid(format!("{name} must be positive")));
        }
        if self.vocab_size < 5 {
            return Err(Error::invalid("vocab_size must be at least 5"));
        }
        if !(self.lr >= 0.0 && self.lr.is_finite()) {
            return Err(Error::invalid(format!("learning rate {}", self.lr)));
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(Error::invalid(format!("decay {} not in (0, 1]", self.decay)));
        }
        if !(self.clip_norm > 0.0) {
            return Err(Error::invalid("clip norm must be positive"));
        }
        if self.chunk_size < self.stride {
            return Err(Error::invalid("chunk_size below stride leaves sentences uncovered"));
        }
        Ok(())
    }

    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let mut v: Vec<(String, String)> = [
            ("command", self.command.clone()),
            ("seed", self.seed.to_string()),
            ("vocab_size", self.vocab_size.to_string()),
            ("d_w", self.d_w.to_string()),
            ("d_h", self.d_h.to_string()),
            ("max_len", self.max_len.to_string()),
            ("n_samples", self.n_samples.to_string()),
            ("batch_size", self.batch_size.to_string()),
            ("optimizer", optim_name(self.optimizer).to_string()),
            ("lr", self.lr.to_string()),
            ("decay", self.decay.to_string()),
            ("epochs", self.epochs.to_string()),
            ("max_steps", self.max_steps.to_string()),
            ("clip_norm", self.clip_norm.to_string()),
            ("reverse_encoder_input", self.reverse_encoder_input.to_string()),
            ("freeze_embeddings", self.freeze_embeddings.to_string()),
            ("chunk_size", self.chunk_size.to_string()),
            ("stride", self.stride.to_string()),
            ("d_chunk", self.d_chunk.to_string()),
            ("d_para", self.d_para.to_string()),
            ("d_attn", self.d_attn.to_string()),
            ("d_dec", self.d_dec.to_string()),
            ("d_emb", self.d_emb.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (format!("run.{k}"), v))
        .collect();
        v.extend(self.paths.iter().map(|(k, p)| (format!("run.path.{k}"), p.clone())));
        v
    }

    /// Inverse of [`to_pairs`](Self::to_pairs); keys without the `run.`
    /// prefix are ignored.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let map: BTreeMap<&str, &str> = pairs
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("run.").map(|k| (k, v.as_str())))
            .collect();
        let get = |k: &str| map.get(k).copied().ok_or_else(|| Error::Format(format!("missing run.{k}")));
        fn num<F: std::str::FromStr>(k: &str, v: &str) -> Result<F> {
            v.parse().map_err(|_| Error::Format(format!("bad value for run.{k}: {v:?}")))
        }
        macro_rules! field {
            ($k:literal) => {
                num($k, get($k)?)?
            };
        }
        let cfg = Self {
            command: get("command")?.to_string(),
            seed: field!("seed"),
            vocab_size: field!("vocab_size"),
            d_w: field!("d_w"),
            d_h: field!("d_h"),
            max_len: field!("max_len"),
            n_samples: field!("n_samples"),
            batch_size: field!("batch_size"),
            optimizer: parse_optim(get("optimizer")?)?,
            lr: field!("lr"),
            decay: field!("decay"),
            epochs: field!("epochs"),
            max_steps: field!("max_steps"),
            clip_norm: field!("clip_norm"),
            reverse_encoder_input: field!("reverse_encoder_input"),
            freeze_embeddings: field!("freeze_embeddings"),
            chunk_size: field!("chunk_size"),
            stride: field!("stride"),
            d_chunk: field!("d_chunk"),
            d_para: field!("d_para"),
            d_attn: field!("d_attn"),
            d_dec: field!("d_dec"),
            d_emb: field!("d_emb"),
            paths: map
                .iter()
                .filter_map(|(k, v)| k.strip_prefix("path.").map(|k| (k.to_string(), v.to_string())))
                .collect(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> Result<String> {
        format_key_values(&self.to_pairs())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_pairs(&parse_key_values(text)?)
    }

    pub fn seq2seq_config(&self, vocab_size: usize) -> Seq2SeqConfig {
        Seq2SeqConfig {
            vocab_size,
            d_w: self.d_w,
            d_h: self.d_h,
            reverse_encoder_input: self.reverse_encoder_input,
            max_len: self.max_len,
            freeze_embeddings: self.freeze_embeddings,
        }
    }

    pub fn hier_config(&self, d_in: usize, vocab_size: usize) -> HierConfig {
        HierConfig {
            d_in,
            d_chunk: self.d_chunk,
            d_para: self.d_para,
            d_attn: self.d_attn,
            d_dec: self.d_dec,
            d_emb: self.d_emb,
            vocab_size,
            chunk_size: self.chunk_size,
            stride: self.stride,
            max_len: self.max_len,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_round_trip() {
        let mut c = RunConfig::default();
        c.command = "train-paraphrase".into();
        c.paths.insert("pairs".into(), "/tmp/a b.tsv".into());
        let text = c.to_text().unwrap();
        assert!(text.contains("run.lr=0.0005\n"));
        assert_eq!(RunConfig::from_text(&text).unwrap(), c);
    }

    #[test]
    fn validation() {
        let c = RunConfig { stride: 6, ..Default::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { decay: 0.0, ..Default::default() };
        assert!(c.validate().is_err());
        assert!(RunConfig::from_text("run.seed=1\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(seed in any::<u64>(), lr in 0.0f64..10.0, decay in 0.01f64..=1.0, d_h in 1usize..2000, adam in any::<bool>(), steps in any::<u64>()) {
            let c = RunConfig {
                seed, lr, decay, d_h, max_steps: steps,
                optimizer: if adam { OptimKind::Adam } else { OptimKind::SgdDecay },
                ..Default::default()
            };
            prop_assert_eq!(RunConfig::from_text(&c.to_text().unwrap()).unwrap(), c);
        }
    }
}
