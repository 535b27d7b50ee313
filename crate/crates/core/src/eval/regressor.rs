use rand::seq::SliceRandom;

use crate::datasets::RelatednessRecord;
use crate::numerics::{
    axpy, derive_seed, init_params, seeded_rng, sigmoid, softmax_in_place, InitScheme, Optimizer, Params, Tensor2,
};
use crate::seq2seq::EncoderDecoderModel;
use crate::text::Vocabulary;
use crate::{Error, Result};

use super::correlation::spearman;

/// Integer scores the regressor distributes probability over.
pub const SCORE_SUPPORT: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];

/// Sentence vectors of a scored pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedPair {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub gold: f64,
}

impl EncodedPair {
    /// `[a ⊙ b ; |a − b|]`
    pub fn features(&self) -> Vec<f64> {
        let mut f: Vec<f64> = self.a.iter().zip(&self.b).map(|(x, y)| x * y).collect();
        f.extend(self.a.iter().zip(&self.b).map(|(x, y)| (x - y).abs()));
        f
    }
}

fn widen(v: &[f32]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

/// Run both sentences of every record through a frozen encoder.
pub fn encode_pairs(
    records: &[RelatednessRecord],
    encoder: &EncoderDecoderModel<f32>,
    vocab: &Vocabulary,
) -> Result<Vec<EncodedPair>> {
    records
        .iter()
        .map(|r| {
            Ok(EncodedPair {
                a: widen(&encoder.encode_text(vocab, &r.sentence_a)?.values),
                b: widen(&encoder.encode_text(vocab, &r.sentence_b)?.values),
                gold: r.gold_score,
            })
        })
        .collect()
}

/// Spearman ρ between negative Euclidean distance and gold score.
pub fn distance_relatedness_check(pairs: &[EncodedPair]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::Empty("relatedness pairs"));
    }
    let neg: Vec<f64> = pairs
        .iter()
        .map(|p| -p.a.iter().zip(&p.b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt())
        .collect();
    let gold: Vec<f64> = pairs.iter().map(|p| p.gold).collect();
    spearman(&neg, &gold)
}

/// Target distribution for a gold score in [1, 5]: mass `⌈y⌉ − y` on `⌊y⌋`
/// and `y − ⌊y⌋` on `⌈y⌉`.
pub fn sparse_target(gold: f64) -> Result<[f64; 5]> {
    if !(1.0..=5.0).contains(&gold) {
        return Err(Error::invalid(format!("score {gold} outside [1, 5]")));
    }
    let mut t = [0.0; 5];
    let lo = gold.floor();
    let i = lo as usize - 1;
    if gold == lo {
        t[i] = 1.0;
    } else {
        t[i] = lo + 1.0 - gold;
        t[i + 1] = gold - lo;
    }
    Ok(t)
}

#[derive(Debug, Clone)]
pub struct RegressorOptions {
    pub hidden: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// L2 penalty on weight matrices.
    pub weight_decay: f64,
    pub seed: u64,
}

impl Default for RegressorOptions {
    fn default() -> Self {
        Self {
            hidden: 50,
            epochs: 100,
            batch_size: 25,
            learning_rate: 1e-2,
            weight_decay: 1e-4,
            seed: 0,
        }
    }
}

/// Sigmoid hidden layer and 5-way softmax over integer scores, trained on
/// KL divergence to the sparse target.
#[derive(Debug, Clone, PartialEq)]
pub struct RelatednessRegressor {
    pub w1: Tensor2<f64>,
    pub b1: Tensor2<f64>,
    pub w2: Tensor2<f64>,
    pub b2: Tensor2<f64>,
}

impl Params<f64> for RelatednessRegressor {
    fn tensors(&self) -> Vec<(String, &Tensor2<f64>)> {
        vec![
            ("w1".into(), &self.w1),
            ("b1".into(), &self.b1),
            ("w2".into(), &self.w2),
            ("b2".into(), &self.b2),
        ]
    }

    fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor2<f64>)> {
        vec![
            ("w1".into(), &mut self.w1),
            ("b1".into(), &mut self.b1),
            ("w2".into(), &mut self.w2),
            ("b2".into(), &mut self.b2),
        ]
    }
}

impl RelatednessRegressor {
    /// `input_width` is the feature width, twice the sentence-vector width.
    pub fn new(input_width: usize, hidden: usize, seed: u64) -> Result<Self> {
        if input_width == 0 || hidden == 0 {
            return Err(Error::invalid("regressor widths must be positive"));
        }
        Ok(Self {
            w1: init_params(hidden, input_width, InitScheme::UniformScaled, derive_seed(seed, 0)),
            b1: Tensor2::zeros(1, hidden),
            w2: init_params(5, hidden, InitScheme::UniformScaled, derive_seed(seed, 1)),
            b2: Tensor2::zeros(1, 5),
        })
    }

    fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut h = self.b1.data().to_vec();
        self.w1.matvec_acc(x, &mut h);
        h.iter_mut().for_each(|v| *v = sigmoid(*v));
        let mut p = self.b2.data().to_vec();
        self.w2.matvec_acc(&h, &mut p);
        softmax_in_place(&mut p);
        (h, p)
    }

    pub fn distribution(&self, pair: &EncodedPair) -> Result<[f64; 5]> {
        let x = pair.features();
        if x.len() != self.w1.cols() {
            return Err(Error::shape(self.w1.cols(), x.len()));
        }
        let (_, p) = self.forward(&x);
        Ok([p[0], p[1], p[2], p[3], p[4]])
    }

    /// Expected score `Σ r·p`, always in [1, 5].
    pub fn predict(&self, pair: &EncodedPair) -> Result<f64> {
        let p = self.distribution(pair)?;
        Ok(p.iter().zip(SCORE_SUPPORT).map(|(p, r)| p * r).sum::<f64>().clamp(1.0, 5.0))
    }

    /// Mean KL(target ‖ predicted) over `batch`, and its gradient. The weight
    /// penalty is not included.
    pub fn loss_and_grads(&self, batch: &[EncodedPair]) -> Result<(f64, Self)> {
        if batch.is_empty() {
            return Err(Error::Empty("regressor batch"));
        }
        let mut g = self.zeros_like();
        let mut loss = 0.0;
        for pair in batch {
            let x = pair.features();
            if x.len() != self.w1.cols() {
                return Err(Error::shape(self.w1.cols(), x.len()));
            }
            let t = sparse_target(pair.gold)?;
            let (h, mut p) = self.forward(&x);
            for (pk, tk) in p.iter().zip(&t) {
                if *tk > 0.0 {
                    loss += tk * (tk.ln() - pk.max(f64::MIN_POSITIVE).ln());
                }
            }
            // d/dlogits of KL with a normalized target is p − t
            p.iter_mut().zip(&t).for_each(|(pk, tk)| *pk -= tk);
            g.w2.outer_acc(&p, &h);
            axpy(1.0, &p, g.b2.data_mut());
            let mut dh = vec![0.0; h.len()];
            self.w2.tmatvec_acc(&p, &mut dh);
            dh.iter_mut().zip(&h).for_each(|(d, h)| *d *= h * (1.0 - h));
            g.w1.outer_acc(&dh, &x);
            axpy(1.0, &dh, g.b1.data_mut());
        }
        let inv = 1.0 / batch.len() as f64;
        g.scale_all(inv);
        Ok((loss * inv, g))
    }

    /// Fit on encoded pairs with Adam.
    pub fn train(pairs: &[EncodedPair], opts: &RegressorOptions) -> Result<Self> {
        let first = pairs.first().ok_or(Error::Empty("regressor training pairs"))?;
        if opts.batch_size == 0 {
            return Err(Error::invalid("batch size must be positive"));
        }
        let mut model = Self::new(2 * first.a.len(), opts.hidden, opts.seed)?;
        let mut optim = Optimizer::adam(opts.learning_rate)?;
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        for epoch in 0..opts.epochs {
            order.shuffle(&mut seeded_rng(derive_seed(opts.seed, 1000 + epoch as u64)));
            for chunk in order.chunks(opts.batch_size) {
                let batch: Vec<EncodedPair> = chunk.iter().map(|&i| pairs[i].clone()).collect();
                let (_, mut g) = model.loss_and_grads(&batch)?;
                g.w1.add_scaled(&model.w1, opts.weight_decay)?;
                g.w2.add_scaled(&model.w2, opts.weight_decay)?;
                optim.step(&mut model, &g)?;
            }
        }
        Ok(model)
    }
}
