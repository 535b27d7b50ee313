use rand::seq::SliceRandom;

use crate::numerics::{
    clip_global_norm, derive_seed, log_sum_exp, seeded_rng, softmax_in_place, Optimizer, Params,
    Scalar,
};
use crate::text::{BOS, EOS, PAD};
use crate::{Error, Result};

use super::model::EncoderDecoderModel;
use super::sampler::LogUniformSampler;

/// One paraphrase pair as ids. `decoder` is the framed target
/// `[BOS, y₁ … y_n, EOS]`, possibly followed by PAD; the decoder reads
/// `decoder[..len-1]` and predicts `decoder[1..]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainExample {
    pub source: Vec<usize>,
    pub decoder: Vec<usize>,
}

impl TrainExample {
    /// Truncates the source to `max_len` tokens and the framed target to
    /// `max_len` predictions.
    pub fn new(source: &[usize], target: &[usize], max_len: usize) -> Self {
        let source = source[..source.len().min(max_len)].to_vec();
        let mut decoder = Vec::with_capacity(target.len() + 2);
        decoder.push(BOS);
        decoder.extend_from_slice(target);
        decoder.push(EOS);
        decoder.truncate(max_len + 1);
        Self { source, decoder }
    }

    /// Number of positions that contribute to the loss.
    pub fn target_count(&self) -> usize {
        self.decoder.iter().skip(1).filter(|&&t| t != PAD).count()
    }
}

#[derive(Debug, Clone)]
pub enum LossMode {
    /// Cross-entropy over the whole vocabulary.
    Full,
    Sampled(LogUniformSampler),
}

impl LossMode {
    pub fn sampled(vocab_size: usize, n_samples: usize) -> Result<Self> {
        Ok(LossMode::Sampled(LogUniformSampler::new(vocab_size, n_samples)?))
    }
}

/// Cross-entropy of candidate 0 under `softmax(logits)`. Returns the loss and
/// overwrites `logits` with `d loss / d logits`.
pub fn candidate_softmax_loss<T: Scalar>(logits: &mut [T], target: usize) -> T {
    let loss = log_sum_exp(logits) - logits[target];
    softmax_in_place(logits);
    logits[target] -= T::one();
    loss
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRecord {
    pub step: u64,
    pub epoch: u64,
    pub loss: f64,
    pub lr: f64,
}

impl LogRecord {
    pub fn tsv(&self) -> String {
        format!("{}\t{}\t{}\t{}", self.step, self.epoch, self.loss, self.lr)
    }
}

impl<T: Scalar> EncoderDecoderModel<T> {
    /// Loss at one decoder position plus its gradient w.r.t. the decoder
    /// hidden state (added into `dh`) and the output projection (added
    /// into `grads`, when given).
    fn output_loss(
        &self,
        h: &[T],
        target: usize,
        mode: &mut LossMode,
        seed: u64,
        grads: Option<&mut Self>,
        dh: &mut [T],
    ) -> T {
        match mode {
            LossMode::Full => {
                let mut logits = self.logits(h);
                let loss = candidate_softmax_loss(&mut logits, target);
                self.proj_w.tmatvec_acc(&logits, dh);
                if let Some(g) = grads {
                    g.proj_w.outer_acc(&logits, h);
                    for (gb, &d) in g.proj_b.data_mut().iter_mut().zip(&logits) {
                        *gb += d;
                    }
                }
                loss
            }
            LossMode::Sampled(sampler) => {
                let cands = sampler.sample(target, &mut seeded_rng(seed));
                let ids: Vec<usize> = cands.ids().collect();
                let mut logits: Vec<T> = ids
                    .iter()
                    .zip(&cands.expected_counts)
                    .map(|(&id, &q)| {
                        crate::numerics::dot(self.proj_w.row(id), h) + self.proj_b.data()[id]
                            - T::of(q.ln())
                    })
                    .collect();
                let loss = candidate_softmax_loss(&mut logits, 0);
                let mut grads = grads;
                for (&id, &d) in ids.iter().zip(&logits) {
                    crate::numerics::axpy(d, self.proj_w.row(id), dh);
                    if let Some(g) = grads.as_deref_mut() {
                        crate::numerics::axpy(d, h, g.proj_w.row_mut(id));
                        g.proj_b.data_mut()[id] += d;
                    }
                }
                loss
            }
        }
    }

    /// Sampled-softmax loss for decoder state `h` and its gradient w.r.t. `h`.
    pub fn sampled_softmax_loss(&self, h: &[T], target: usize, n_samples: usize, seed: u64) -> Result<(T, Vec<T>)> {
        let mut mode = LossMode::sampled(self.vocab_size(), n_samples)?;
        let mut dh = vec![T::zero(); h.len()];
        let loss = self.output_loss(h, target, &mut mode, seed, None, &mut dh);
        Ok((loss, dh))
    }

    /// Full-softmax loss for decoder state `h` and its gradient w.r.t. `h`.
    pub fn full_softmax_loss(&self, h: &[T], target: usize) -> (T, Vec<T>) {
        let mut dh = vec![T::zero(); h.len()];
        let loss = self.output_loss(h, target, &mut LossMode::Full, 0, None, &mut dh);
        (loss, dh)
    }

    /// Forward and backward for one example; gradients are summed into
    /// `grads`. Returns (summed loss, number of scored positions).
    fn accumulate_example(
        &self,
        ex: &TrainExample,
        mode: &mut LossMode,
        seed: u64,
        grads: &mut Self,
    ) -> Result<(f64, usize)> {
        let d_h = self.config.d_h;
        if ex.decoder.len() < 2 || ex.decoder.iter().any(|&t| t >= self.vocab_size()) {
            return Err(Error::invalid("decoder sequence too short or outside vocabulary"));
        }
        let Some(last) = ex.decoder.iter().rposition(|&t| t != PAD).filter(|&p| p >= 1) else {
            return Err(Error::invalid("target is all PAD"));
        };
        let enc = self.encode_steps(&ex.source)?;
        let enc_last = enc.last().expect("non-empty source");

        // decoder forward up to the last scored target
        let inputs = &ex.decoder[..last];
        let targets = &ex.decoder[1..=last];
        let mut dec = Vec::with_capacity(inputs.len());
        for &tok in inputs {
            let step = match dec.last() {
                None => self.decoder.forward(self.embedding.row(tok), &enc_last.h, &enc_last.c),
                Some(prev) => {
                    let prev: &super::LstmStep<T> = prev;
                    self.decoder.forward(self.embedding.row(tok), &prev.h, &prev.c)
                }
            };
            dec.push(step);
        }

        let mut loss = 0.0;
        let mut count = 0;
        let mut dh_out: Vec<Vec<T>> = Vec::with_capacity(dec.len());
        for (t, (step, &y)) in dec.iter().zip(targets).enumerate() {
            let mut dh = vec![T::zero(); d_h];
            if y != PAD {
                let l = self.output_loss(&step.h, y, mode, derive_seed(seed, t as u64), Some(grads), &mut dh);
                loss += l.as_f64();
                count += 1;
            }
            dh_out.push(dh);
        }

        let mut dh_next = vec![T::zero(); d_h];
        let mut dc_next = vec![T::zero(); d_h];
        let mut dh_prev = vec![T::zero(); d_h];
        let mut dc_prev = vec![T::zero(); d_h];
        let mut dx = vec![T::zero(); self.config.d_w];
        for t in (0..dec.len()).rev() {
            for (a, &b) in dh_next.iter_mut().zip(&dh_out[t]) {
                *a += b;
            }
            dx.fill(T::zero());
            self.decoder.backward(&dec[t], &dh_next, &dc_next, &mut grads.decoder, Some(&mut dx), &mut dh_prev, &mut dc_prev);
            crate::numerics::axpy(T::one(), &dx, grads.embedding.matrix.row_mut(inputs[t]));
            std::mem::swap(&mut dh_next, &mut dh_prev);
            std::mem::swap(&mut dc_next, &mut dc_prev);
        }

        let order = self.encoder_order(&ex.source);
        for t in (0..enc.len()).rev() {
            dx.fill(T::zero());
            self.encoder.backward(&enc[t], &dh_next, &dc_next, &mut grads.encoder, Some(&mut dx), &mut dh_prev, &mut dc_prev);
            crate::numerics::axpy(T::one(), &dx, grads.embedding.matrix.row_mut(order[t]));
            std::mem::swap(&mut dh_next, &mut dh_prev);
            std::mem::swap(&mut dc_next, &mut dc_prev);
        }
        Ok((loss, count))
    }

    /// Mean per-token loss over `batch` and its gradient. PAD targets are
    /// excluded from both.
    pub fn loss_and_grads(&self, batch: &[TrainExample], mode: &mut LossMode, seed: u64) -> Result<(f64, Self)> {
        let mut grads = self.zeros_like();
        let (loss, count) = self.accumulate_batch(batch, mode, seed, &mut grads)?;
        grads.scale_all(T::of(1.0 / count as f64));
        Ok((loss / count as f64, grads))
    }

    fn accumulate_batch(&self, batch: &[TrainExample], mode: &mut LossMode, seed: u64, grads: &mut Self) -> Result<(f64, usize)> {
        if batch.is_empty() {
            return Err(Error::Empty("training batch"));
        }
        let mut loss = 0.0;
        let mut count = 0;
        for (i, ex) in batch.iter().enumerate() {
            let (l, c) = self.accumulate_example(ex, mode, derive_seed(seed, i as u64), grads)?;
            loss += l;
            count += c;
        }
        Ok((loss, count))
    }

    /// Mean per-token loss without gradients (the sampled loss when `mode` samples).
    pub fn batch_loss(&self, batch: &[TrainExample], mode: &mut LossMode, seed: u64) -> Result<f64> {
        Ok(self.loss_and_grads(batch, mode, seed)?.0)
    }
}

#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub batch_size: usize,
    /// Negatives per position; `None` trains with the full softmax.
    pub n_samples: Option<usize>,
    pub clip_norm: f64,
    pub seed: u64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            batch_size: 64,
            n_samples: Some(512),
            clip_norm: 5.0,
            seed: 0,
        }
    }
}

/// Owns a model and its optimizer and runs teacher-forced training steps.
#[derive(Debug, Clone)]
pub struct Seq2SeqTrainer<T> {
    pub model: EncoderDecoderModel<T>,
    pub optimizer: Optimizer<T>,
    pub options: TrainOptions,
    mode: LossMode,
    grads: EncoderDecoderModel<T>,
    step: u64,
    pub log: Vec<LogRecord>,
}

impl<T: Scalar> Seq2SeqTrainer<T> {
    pub fn new(model: EncoderDecoderModel<T>, optimizer: Optimizer<T>, options: TrainOptions) -> Result<Self> {
        if options.batch_size == 0 {
            return Err(Error::invalid("batch size must be positive"));
        }
        let mode = match options.n_samples {
            Some(n) => LossMode::sampled(model.vocab_size(), n)?,
            None => LossMode::Full,
        };
        let grads = model.zeros_like();
        Ok(Self {
            model,
            optimizer,
            options,
            mode,
            grads,
            step: 0,
            log: Vec::new(),
        })
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    /// One optimizer update on `batch`; returns the mean per-token loss
    /// before the update.
    pub fn train_step(&mut self, batch: &[TrainExample]) -> Result<f64> {
        self.grads.zero();
        let seed = derive_seed(self.options.seed, self.step);
        let (loss, count) = self.model.accumulate_batch(batch, &mut self.mode, seed, &mut self.grads)?;
        if count == 0 {
            return Err(Error::invalid("batch has no scored target tokens"));
        }
        self.grads.scale_all(T::of(1.0 / count as f64));
        if self.model.config.freeze_embeddings {
            self.grads.embedding.matrix.fill(T::zero());
        }
        clip_global_norm(&mut self.grads, self.options.clip_norm);
        self.optimizer.step(&mut self.model, &self.grads)?;
        let mean = loss / count as f64;
        self.log.push(LogRecord {
            step: self.step,
            epoch: self.optimizer.state.epoch,
            loss: mean,
            lr: self.optimizer.current_lr(),
        });
        self.step += 1;
        Ok(mean)
    }

    /// One shuffled pass over `data` in minibatches, then learning-rate
    /// decay. Returns the mean of the batch losses.
    pub fn train_epoch(&mut self, data: &[TrainExample]) -> Result<f64> {
        self.train_epoch_until(data, u64::MAX)
    }

    /// As [`train_epoch`](Self::train_epoch), but stops once `step_limit`
    /// steps have been taken in total. A cut-short epoch does not decay the
    /// learning rate.
    pub fn train_epoch_until(&mut self, data: &[TrainExample], step_limit: u64) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::Empty("training data"));
        }
        let mut order: Vec<usize> = (0..data.len()).collect();
        let epoch = self.optimizer.state.epoch;
        order.shuffle(&mut seeded_rng(derive_seed(self.options.seed ^ 0x5eed, epoch)));
        let mut total = 0.0;
        let mut batches = 0;
        for chunk in order.chunks(self.options.batch_size) {
            if self.step >= step_limit {
                break;
            }
            let batch: Vec<TrainExample> = chunk.iter().map(|&i| data[i].clone()).collect();
            total += self.train_step(&batch)?;
            batches += 1;
        }
        if batches == order.len().div_ceil(self.options.batch_size) {
            self.optimizer.end_epoch();
        }
        Ok(if batches == 0 { f64::NAN } else { total / batches as f64 })
    }
}
