use rand::seq::SliceRandom;

use crate::numerics::{axpy, clip_global_norm, derive_seed, seeded_rng, Optimizer, Params, Scalar};
use crate::seq2seq::{candidate_softmax_loss, EncoderDecoderModel, LogRecord, LstmStep};
use crate::text::{Vocabulary, BOS, EOS, PAD};
use crate::{Error, Result};

use super::attention::AttentionCache;
use super::model::{HierModel, T_MAX};

/// A paragraph's sentence vectors and its framed summary
/// `[BOS, y₁ … y_n, EOS]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryExample<T> {
    pub sent_vecs: Vec<Vec<T>>,
    pub decoder: Vec<usize>,
}

impl<T: Scalar> SummaryExample<T> {
    pub fn new(sent_vecs: Vec<Vec<T>>, summary: &[usize], max_len: usize) -> Result<Self> {
        if summary.is_empty() {
            return Err(Error::Empty("summary"));
        }
        let mut decoder = Vec::with_capacity(summary.len() + 2);
        decoder.push(BOS);
        decoder.extend_from_slice(summary);
        decoder.push(EOS);
        decoder.truncate(max_len + 1);
        Ok(Self { sent_vecs, decoder })
    }
}

/// Sentence vectors for the detail sentences of a paragraph, from a frozen
/// paraphrase encoder.
pub fn sentence_vectors<T: Scalar>(
    encoder: &EncoderDecoderModel<f32>,
    vocab: &Vocabulary,
    sentences: &[String],
) -> Result<Vec<Vec<T>>> {
    if sentences.len() > T_MAX {
        return Err(Error::invalid(format!("{} sentences exceed {T_MAX} slots", sentences.len())));
    }
    sentences
        .iter()
        .map(|s| Ok(encoder.encode_text(vocab, s)?.values.iter().map(|&x| T::from_f32(x)).collect()))
        .collect()
}

/// Loss for one or more examples plus attention diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryLoss {
    /// Mean cross-entropy per scored summary token.
    pub loss: f64,
    pub tokens: usize,
    /// Largest `|Σ weights − 1|` over every attention call made.
    pub max_attention_deviation: f64,
}

struct DecoderStep<T> {
    attn: AttentionCache<T>,
    lstm: LstmStep<T>,
}

impl<T: Scalar> HierModel<T> {
    fn accumulate_example(&self, ex: &SummaryExample<T>, grads: &mut Self) -> Result<(f64, usize, f64)> {
        let c = &self.config;
        if ex.decoder.iter().any(|&t| t >= c.vocab_size) {
            return Err(Error::invalid("summary token outside vocabulary"));
        }
        let Some(last) = ex.decoder.iter().rposition(|&t| t != PAD).filter(|&p| p >= 1) else {
            return Err(Error::Empty("summary"));
        };
        let enc = self.encode_paragraph(&ex.sent_vecs)?;
        let cache = &enc.cache;
        let mut deviation = 0.0f64;
        for w in &enc.chunk_weights {
            deviation = deviation.max((w.iter().copied().sum::<T>().as_f64() - 1.0).abs());
        }

        // decoder forward
        let inputs = &ex.decoder[..last];
        let targets = &ex.decoder[1..=last];
        let p = &enc.paragraph_vec.values;
        let h0 = self.initial_decoder_state(p);
        let c0 = vec![T::zero(); c.d_dec];
        let mut steps: Vec<DecoderStep<T>> = Vec::with_capacity(inputs.len());
        for &tok in inputs {
            let (h, cc) = match steps.last() {
                Some(s) => (s.lstm.h.as_slice(), s.lstm.c.as_slice()),
                None => (h0.as_slice(), c0.as_slice()),
            };
            let attn = self.dec_attn.forward(h, &enc.states);
            deviation = deviation.max((attn.weights.iter().copied().sum::<T>().as_f64() - 1.0).abs());
            let lstm = self.decoder.forward(&self.decoder_input(tok, &attn.context), h, cc);
            steps.push(DecoderStep { attn, lstm });
        }

        // output layer
        let mut loss = 0.0;
        let mut count = 0;
        let mut dh_out = Vec::with_capacity(steps.len());
        for (s, &y) in steps.iter().zip(targets) {
            let mut dh = vec![T::zero(); c.d_dec];
            if y != PAD {
                let mut logits = self.logits(&s.lstm.h);
                loss += candidate_softmax_loss(&mut logits, y).as_f64();
                count += 1;
                self.out_w.tmatvec_acc(&logits, &mut dh);
                grads.out_w.outer_acc(&logits, &s.lstm.h);
                axpy(T::one(), &logits, grads.out_b.data_mut());
            }
            dh_out.push(dh);
        }

        // decoder backward
        let n_states = enc.states.len();
        let mut dstates = vec![vec![T::zero(); c.d_para]; n_states];
        let mut dh_next = vec![T::zero(); c.d_dec];
        let mut dc_next = vec![T::zero(); c.d_dec];
        let mut dh_prev = vec![T::zero(); c.d_dec];
        let mut dc_prev = vec![T::zero(); c.d_dec];
        let mut dx = vec![T::zero(); c.d_emb + c.d_para];
        for t in (0..steps.len()).rev() {
            axpy(T::one(), &dh_out[t], &mut dh_next);
            dx.fill(T::zero());
            self.decoder.backward(&steps[t].lstm, &dh_next, &dc_next, &mut grads.decoder, Some(&mut dx), &mut dh_prev, &mut dc_prev);
            axpy(T::one(), &dx[..c.d_emb], grads.embedding.row_mut(inputs[t]));
            self.dec_attn.backward(&steps[t].attn, &enc.states, &dx[c.d_emb..], &mut grads.dec_attn, &mut dh_prev, &mut dstates);
            std::mem::swap(&mut dh_next, &mut dh_prev);
            std::mem::swap(&mut dc_next, &mut dc_prev);
        }

        // h0 = tanh(init_w p + init_b)
        let dz: Vec<T> = dh_next.iter().zip(&h0).map(|(&d, &h)| d * (T::one() - h * h)).collect();
        grads.init_w.outer_acc(&dz, p);
        axpy(T::one(), &dz, grads.init_b.data_mut());
        self.init_w.tmatvec_acc(&dz, &mut dstates[n_states - 1]);

        // second layer backward
        let mut dfeat = vec![vec![T::zero(); c.d_chunk]; cache.features.len()];
        let mut dh2 = vec![T::zero(); c.d_para];
        let mut dc2 = vec![T::zero(); c.d_para];
        let mut dh2_prev = vec![T::zero(); c.d_para];
        let mut dc2_prev = vec![T::zero(); c.d_para];
        let mut dx2 = vec![T::zero(); 2 * c.d_chunk];
        for t in (0..n_states).rev() {
            axpy(T::one(), &dstates[t], &mut dh2);
            dx2.fill(T::zero());
            self.layer2.backward(&cache.l2_steps[t], &dh2, &dc2, &mut grads.layer2, Some(&mut dx2), &mut dh2_prev, &mut dc2_prev);
            axpy(T::one(), &dx2[..c.d_chunk], &mut dfeat[t]);
            // the first step's query is the constant zero state; its gradient is dropped
            self.chunk_attn.backward(&cache.l2_attn[t], &cache.features, &dx2[c.d_chunk..], &mut grads.chunk_attn, &mut dh2_prev, &mut dfeat);
            std::mem::swap(&mut dh2, &mut dh2_prev);
            std::mem::swap(&mut dc2, &mut dc2_prev);
        }

        // first layer backward, chunk by chunk
        let mut dh1_prev = vec![T::zero(); c.d_chunk];
        let mut dc1_prev = vec![T::zero(); c.d_chunk];
        for ((_, l1_steps), df) in cache.chunks.iter().zip(&dfeat) {
            let mut dh1 = df.clone();
            let mut dc1 = vec![T::zero(); c.d_chunk];
            for s in l1_steps.iter().rev() {
                self.layer1.backward(s, &dh1, &dc1, &mut grads.layer1, None, &mut dh1_prev, &mut dc1_prev);
                std::mem::swap(&mut dh1, &mut dh1_prev);
                std::mem::swap(&mut dc1, &mut dc1_prev);
            }
        }
        Ok((loss, count, deviation))
    }

    fn accumulate_batch(&self, batch: &[SummaryExample<T>], grads: &mut Self) -> Result<SummaryLoss> {
        if batch.is_empty() {
            return Err(Error::Empty("training batch"));
        }
        let mut total = 0.0;
        let mut tokens = 0;
        let mut dev = 0.0f64;
        for ex in batch {
            let (l, n, d) = self.accumulate_example(ex, grads)?;
            total += l;
            tokens += n;
            dev = dev.max(d);
        }
        Ok(SummaryLoss {
            loss: total / tokens as f64,
            tokens,
            max_attention_deviation: dev,
        })
    }

    /// Mean per-token cross-entropy of `batch` and its gradient.
    pub fn loss_and_grads(&self, batch: &[SummaryExample<T>]) -> Result<(SummaryLoss, Self)> {
        let mut grads = self.zeros_like();
        let stats = self.accumulate_batch(batch, &mut grads)?;
        grads.scale_all(T::of(1.0 / stats.tokens as f64));
        Ok((stats, grads))
    }

    pub fn batch_loss(&self, batch: &[SummaryExample<T>]) -> Result<f64> {
        Ok(self.loss_and_grads(batch)?.0.loss)
    }
}

#[derive(Debug, Clone)]
pub struct HierTrainOptions {
    pub batch_size: usize,
    pub clip_norm: f64,
    pub seed: u64,
}

impl Default for HierTrainOptions {
    fn default() -> Self {
        Self {
            batch_size: 32,
            clip_norm: 5.0,
            seed: 0,
        }
    }
}

/// Teacher-forced summarizer training with full softmax.
#[derive(Debug, Clone)]
pub struct HierTrainer<T> {
    pub model: HierModel<T>,
    pub optimizer: Optimizer<T>,
    pub options: HierTrainOptions,
    grads: HierModel<T>,
    step: u64,
    pub log: Vec<LogRecord>,
    /// Largest attention-normalization error seen so far.
    pub max_attention_deviation: f64,
}

impl<T: Scalar> HierTrainer<T> {
    pub fn new(model: HierModel<T>, optimizer: Optimizer<T>, options: HierTrainOptions) -> Result<Self> {
        if options.batch_size == 0 {
            return Err(Error::invalid("batch size must be positive"));
        }
        let grads = model.zeros_like();
        Ok(Self {
            model,
            optimizer,
            options,
            grads,
            step: 0,
            log: Vec::new(),
            max_attention_deviation: 0.0,
        })
    }

    pub fn train_step(&mut self, batch: &[SummaryExample<T>]) -> Result<f64> {
        self.grads.zero();
        let stats = self.model.accumulate_batch(batch, &mut self.grads)?;
        self.max_attention_deviation = self.max_attention_deviation.max(stats.max_attention_deviation);
        self.grads.scale_all(T::of(1.0 / stats.tokens as f64));
        clip_global_norm(&mut self.grads, self.options.clip_norm);
        self.optimizer.step(&mut self.model, &self.grads)?;
        self.log.push(LogRecord {
            step: self.step,
            epoch: self.optimizer.state.epoch,
            loss: stats.loss,
            lr: self.optimizer.current_lr(),
        });
        self.step += 1;
        Ok(stats.loss)
    }

    /// One shuffled pass; returns the mean batch loss.
    pub fn train_epoch(&mut self, data: &[SummaryExample<T>]) -> Result<f64> {
        self.train_epoch_until(data, u64::MAX)
    }

    /// Stops once `step_limit` steps have been taken in total.
    pub fn train_epoch_until(&mut self, data: &[SummaryExample<T>], step_limit: u64) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::Empty("training data"));
        }
        let mut order: Vec<usize> = (0..data.len()).collect();
        order.shuffle(&mut seeded_rng(derive_seed(self.options.seed, self.optimizer.state.epoch)));
        let mut total = 0.0;
        let mut n = 0;
        for chunk in order.chunks(self.options.batch_size) {
            if self.step >= step_limit {
                break;
            }
            let batch: Vec<SummaryExample<T>> = chunk.iter().map(|&i| data[i].clone()).collect();
            total += self.train_step(&batch)?;
            n += 1;
        }
        if n == order.len().div_ceil(self.options.batch_size) {
            self.optimizer.end_epoch();
        }
        Ok(if n == 0 { f64::NAN } else { total / n as f64 })
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }
}
