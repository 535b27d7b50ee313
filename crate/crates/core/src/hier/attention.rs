use crate::numerics::{dot, init_params, derive_seed, softmax_in_place, InitScheme, Params, Scalar, Tensor2};
use crate::{Error, Result};

/// Additive attention: `e_i = vᵀ tanh(W_s q + U_h k_i)`, weights `softmax(e)`,
/// context `Σ w_i k_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionParams<T> {
    /// `d_a x d_query`
    pub w_s: Tensor2<T>,
    /// `d_a x d_key`
    pub u_h: Tensor2<T>,
    /// `1 x d_a`
    pub v: Tensor2<T>,
}

#[derive(Debug, Clone)]
pub struct AttentionCache<T> {
    query: Vec<T>,
    /// `tanh(W_s q + U_h k_i)` per key.
    act: Vec<Vec<T>>,
    pub weights: Vec<T>,
    pub context: Vec<T>,
}

impl<T: Scalar> AttentionParams<T> {
    pub fn new(query_width: usize, key_width: usize, attn_width: usize, seed: u64) -> Self {
        Self {
            w_s: init_params(attn_width, query_width, InitScheme::UniformScaled, derive_seed(seed, 0)),
            u_h: init_params(attn_width, key_width, InitScheme::UniformScaled, derive_seed(seed, 1)),
            v: init_params(1, attn_width, InitScheme::UniformScaled, derive_seed(seed, 2)),
        }
    }

    pub fn query_width(&self) -> usize {
        self.w_s.cols()
    }

    pub fn key_width(&self) -> usize {
        self.u_h.cols()
    }

    /// Context vector and weights for `query` over `keys`.
    pub fn attend(&self, query: &[T], keys: &[Vec<T>]) -> Result<(Vec<T>, Vec<T>)> {
        if keys.is_empty() {
            return Err(Error::Empty("attention keys"));
        }
        if query.len() != self.query_width() || keys.iter().any(|k| k.len() != self.key_width()) {
            return Err(Error::shape(
                format!("query {} keys {}", self.query_width(), self.key_width()),
                format!("query {} keys {}", query.len(), keys[0].len()),
            ));
        }
        let c = self.forward(query, keys);
        Ok((c.context, c.weights))
    }

    pub fn forward(&self, query: &[T], keys: &[Vec<T>]) -> AttentionCache<T> {
        let d_a = self.w_s.rows();
        let mut base = vec![T::zero(); d_a];
        self.w_s.matvec(query, &mut base);
        let mut act = Vec::with_capacity(keys.len());
        let mut scores = Vec::with_capacity(keys.len());
        for k in keys {
            let mut a = base.clone();
            self.u_h.matvec_acc(k, &mut a);
            a.iter_mut().for_each(|x| *x = x.tanh());
            scores.push(dot(self.v.data(), &a));
            act.push(a);
        }
        softmax_in_place(&mut scores);
        let mut context = vec![T::zero(); self.key_width()];
        for (w, k) in scores.iter().zip(keys) {
            crate::numerics::axpy(*w, k, &mut context);
        }
        AttentionCache {
            query: query.to_vec(),
            act,
            weights: scores,
            context,
        }
    }

    /// Backprop `dcontext`. Parameter gradients, `dquery` and `dkeys` are accumulated.
    pub fn backward(
        &self,
        cache: &AttentionCache<T>,
        keys: &[Vec<T>],
        dcontext: &[T],
        grads: &mut AttentionParams<T>,
        dquery: &mut [T],
        dkeys: &mut [Vec<T>],
    ) {
        let one = T::one();
        let dw: Vec<T> = keys.iter().map(|k| dot(dcontext, k)).collect();
        let mean: T = cache.weights.iter().zip(&dw).map(|(&w, &d)| w * d).sum();
        let d_a = self.w_s.rows();
        let mut dz_sum = vec![T::zero(); d_a];
        for (i, k) in keys.iter().enumerate() {
            let wi = cache.weights[i];
            crate::numerics::axpy(wi, dcontext, &mut dkeys[i]);
            let de = wi * (dw[i] - mean);
            let a = &cache.act[i];
            crate::numerics::axpy(de, a, grads.v.data_mut());
            let dz: Vec<T> = a
                .iter()
                .zip(self.v.data())
                .map(|(&ai, &vi)| de * vi * (one - ai * ai))
                .collect();
            grads.u_h.outer_acc(&dz, k);
            self.u_h.tmatvec_acc(&dz, &mut dkeys[i]);
            for (s, d) in dz_sum.iter_mut().zip(&dz) {
                *s += *d;
            }
        }
        grads.w_s.outer_acc(&dz_sum, &cache.query);
        self.w_s.tmatvec_acc(&dz_sum, dquery);
    }
}

impl<T: Scalar> Params<T> for AttentionParams<T> {
    fn tensors(&self) -> Vec<(String, &Tensor2<T>)> {
        vec![("w_s".into(), &self.w_s), ("u_h".into(), &self.u_h), ("v".into(), &self.v)]
    }

    fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor2<T>)> {
        vec![
            ("w_s".into(), &mut self.w_s),
            ("u_h".into(), &mut self.u_h),
            ("v".into(), &mut self.v),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{grad_check, GradCheckOptions};

    fn att() -> AttentionParams<f64> {
        AttentionParams::new(3, 2, 4, 8)
    }

    #[test]
    fn identical_keys_uniform() {
        let (ctx, w) = att().attend(&[0.1, 0.5, -0.3], &vec![vec![0.2, 0.7]; 4]).unwrap();
        for x in &w {
            assert!((x - 0.25).abs() < 1e-15);
        }
        assert!((ctx[0] - 0.2).abs() < 1e-15 && (ctx[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn single_key() {
        let (ctx, w) = att().attend(&[1.0, 2.0, 3.0], &[vec![0.4, -0.9]]).unwrap();
        assert_eq!(w, vec![1.0]);
        assert_eq!(ctx, vec![0.4, -0.9]);
    }

    #[test]
    fn zero_v_gives_uniform() {
        let mut a = att();
        a.v.fill(0.0);
        let (_, w) = a.attend(&[1.0, 2.0, 3.0], &[vec![1.0, 0.0], vec![-5.0, 3.0], vec![0.0, 9.0]]).unwrap();
        assert!(w.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn empty_keys_error() {
        assert!(matches!(att().attend(&[0.0; 3], &[]), Err(Error::Empty(_))));
    }

    #[test]
    fn gradients() {
        let mut a = att();
        let q = [0.3, -0.8, 0.5];
        let keys = vec![vec![0.2, 0.9], vec![-0.4, 0.1], vec![0.7, -0.6]];
        let r = [1.3, -0.7];
        let loss = |a: &AttentionParams<f64>| -> Result<f64> {
            Ok(dot(&a.forward(&q, &keys).context, &r))
        };
        let cache = a.forward(&q, &keys);
        let mut g = a.zeros_like();
        let mut dq = vec![0.0; 3];
        let mut dk = vec![vec![0.0; 2]; 3];
        a.backward(&cache, &keys, &r, &mut g, &mut dq, &mut dk);
        let rep = grad_check(&mut a, &g, loss, GradCheckOptions::default()).unwrap();
        assert!(rep.max_rel_err < 1e-8, "{rep:?}");

        // input gradients via finite differences
        let eps = 1e-6;
        for j in 0..3 {
            let mut qp = q;
            qp[j] += eps;
            let mut qm = q;
            qm[j] -= eps;
            let num = (dot(&a.forward(&qp, &keys).context, &r) - dot(&a.forward(&qm, &keys).context, &r)) / (2.0 * eps);
            assert!((num - dq[j]).abs() < 1e-8);
        }
        for i in 0..3 {
            for j in 0..2 {
                let mut kp = keys.clone();
                kp[i][j] += eps;
                let mut km = keys.clone();
                km[i][j] -= eps;
                let num = (dot(&a.forward(&q, &kp).context, &r) - dot(&a.forward(&q, &km).context, &r)) / (2.0 * eps);
                assert!((num - dk[i][j]).abs() < 1e-8);
            }
        }
    }
}
