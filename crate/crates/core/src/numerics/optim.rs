use super::{Params, Scalar, Tensor2};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimKind {
    /// Plain SGD whose learning rate is multiplied by `decay_factor` once per epoch.
    SgdDecay,
    Adam,
}

#[derive(Debug, Clone)]
pub struct OptimState<T> {
    pub kind: OptimKind,
    pub learning_rate: f64,
    pub decay_factor: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub step_count: u64,
    pub epoch: u64,
    /// First and second moment buffers, one pair per parameter tensor (Adam only).
    moments: Vec<(Tensor2<T>, Tensor2<T>)>,
}

#[derive(Debug, Clone)]
pub struct Optimizer<T> {
    pub state: OptimState<T>,
}

impl<T: Scalar> Optimizer<T> {
    pub fn new(kind: OptimKind, learning_rate: f64, decay_factor: f64) -> Result<Self> {
        if !(learning_rate >= 0.0 && learning_rate.is_finite()) {
            return Err(Error::invalid(format!("learning rate {learning_rate}")));
        }
        if !(decay_factor > 0.0 && decay_factor <= 1.0) {
            return Err(Error::invalid(format!("decay factor {decay_factor} not in (0, 1]")));
        }
        Ok(Self {
            state: OptimState {
                kind,
                learning_rate,
                decay_factor,
                adam_beta1: 0.9,
                adam_beta2: 0.999,
                adam_eps: 1e-8,
                step_count: 0,
                epoch: 0,
                moments: Vec::new(),
            },
        })
    }

    pub fn sgd(learning_rate: f64, decay_factor: f64) -> Result<Self> {
        Self::new(OptimKind::SgdDecay, learning_rate, decay_factor)
    }

    pub fn adam(learning_rate: f64) -> Result<Self> {
        Self::new(OptimKind::Adam, learning_rate, 1.0)
    }

    /// `lr₀ · decay^epoch`
    pub fn current_lr(&self) -> f64 {
        self.state.learning_rate * self.state.decay_factor.powi(self.state.epoch as i32)
    }

    pub fn end_epoch(&mut self) {
        self.state.epoch += 1;
    }

    pub fn step<P: Params<T>>(&mut self, params: &mut P, grads: &P) -> Result<()> {
        let grads: Vec<&Tensor2<T>> = grads.tensors().into_iter().map(|(_, t)| t).collect();
        let mut params: Vec<&mut Tensor2<T>> =
            params.tensors_mut().into_iter().map(|(_, t)| t).collect();
        match self.state.kind {
            OptimKind::SgdDecay => self.sgd_decay_step(&mut params, &grads),
            OptimKind::Adam => self.adam_step(&mut params, &grads),
        }
    }

    fn check_shapes(params: &[&mut Tensor2<T>], grads: &[&Tensor2<T>]) -> Result<()> {
        if params.len() != grads.len() {
            return Err(Error::shape(
                format!("{} gradient tensors", params.len()),
                grads.len(),
            ));
        }
        for (p, g) in params.iter().zip(grads) {
            p.check_same_shape(g)?;
        }
        Ok(())
    }

    /// `p ← p − lr_t · g`
    pub fn sgd_decay_step(&mut self, params: &mut [&mut Tensor2<T>], grads: &[&Tensor2<T>]) -> Result<()> {
        Self::check_shapes(params, grads)?;
        let lr = T::of(self.current_lr());
        for (p, g) in params.iter_mut().zip(grads) {
            for (pv, &gv) in p.data_mut().iter_mut().zip(g.data()) {
                *pv -= lr * gv;
            }
        }
        self.state.step_count += 1;
        Ok(())
    }

    /// Adam with bias-corrected moments.
    pub fn adam_step(&mut self, params: &mut [&mut Tensor2<T>], grads: &[&Tensor2<T>]) -> Result<()> {
        Self::check_shapes(params, grads)?;
        let st = &mut self.state;
        if st.moments.is_empty() {
            st.moments = params
                .iter()
                .map(|p| (Tensor2::zeros(p.rows(), p.cols()), Tensor2::zeros(p.rows(), p.cols())))
                .collect();
        } else if st.moments.len() != params.len()
            || st.moments.iter().zip(params.iter()).any(|(m, p)| m.0.shape() != p.shape())
        {
            return Err(Error::shape("moment buffers matching parameters", "different layout"));
        }
        st.step_count += 1;
        let t = st.step_count as i32;
        let lr = st.learning_rate * st.decay_factor.powi(st.epoch as i32);
        let b1 = T::of(st.adam_beta1);
        let b2 = T::of(st.adam_beta2);
        let one = T::one();
        let c1 = T::of(1.0 - st.adam_beta1.powi(t));
        let c2 = T::of(1.0 - st.adam_beta2.powi(t));
        let lr = T::of(lr);
        let eps = T::of(st.adam_eps);
        for ((p, g), (m, v)) in params.iter_mut().zip(grads).zip(st.moments.iter_mut()) {
            let pd = p.data_mut();
            let md = m.data_mut();
            let vd = v.data_mut();
            for i in 0..pd.len() {
                let gi = g.data()[i];
                md[i] = b1 * md[i] + (one - b1) * gi;
                vd[i] = b2 * vd[i] + (one - b2) * gi * gi;
                let mh = md[i] / c1;
                let vh = vd[i] / c2;
                pd[i] -= lr * mh / (vh.sqrt() + eps);
            }
        }
        Ok(())
    }

    pub fn moments(&self) -> &[(Tensor2<T>, Tensor2<T>)] {
        &self.state.moments
    }
}

/// Rescale `grads` so its global L2 norm is at most `max_norm`. Returns the
/// norm before clipping.
pub fn clip_global_norm<T: Scalar, P: Params<T>>(grads: &mut P, max_norm: f64) -> f64 {
    let norm = grads.global_norm().as_f64();
    if norm > max_norm && norm.is_finite() {
        grads.scale_all(T::of(max_norm / norm));
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> Tensor2<f64> {
        Tensor2::row_vector(vec![v])
    }

    #[test]
    fn sgd_single_step() {
        let mut opt = Optimizer::<f64>::sgd(0.1, 1.0).unwrap();
        let mut p = scalar(1.0);
        opt.step(&mut p, &scalar(0.5)).unwrap();
        assert!((p.data()[0] - 0.95).abs() < 1e-15);
    }

    #[test]
    fn sgd_zero_grad_is_identity() {
        let mut opt = Optimizer::<f32>::sgd(0.3, 0.99).unwrap();
        let mut p = Tensor2::row_vector(vec![1.234f32, -5.5e-3, 7.0]);
        let before = p.clone();
        opt.step(&mut p, &Tensor2::zeros(1, 3)).unwrap();
        assert_eq!(p, before);
    }

    #[test]
    fn decay_once_per_epoch() {
        let mut opt = Optimizer::<f32>::sgd(0.0005, 0.99).unwrap();
        opt.end_epoch();
        opt.end_epoch();
        assert!((opt.current_lr() - 0.00049005).abs() < 1e-15);
    }

    #[test]
    fn adam_zero_grad_is_identity() {
        let mut opt = Optimizer::<f64>::adam(0.01).unwrap();
        let mut p = Tensor2::row_vector(vec![0.3, -0.7]);
        let before = p.clone();
        opt.step(&mut p, &Tensor2::zeros(1, 2)).unwrap();
        assert_eq!(p, before);
    }

    #[test]
    fn adam_first_step_magnitude_is_lr() {
        // m̂ = g, v̂ = g², so the step is lr · g / (|g| + eps) ≈ lr.
        let lr = 1e-3;
        let mut opt = Optimizer::<f64>::adam(lr).unwrap();
        let mut p = Tensor2::row_vector(vec![2.0, 2.0]);
        opt.step(&mut p, &Tensor2::row_vector(vec![1.0, 1.0])).unwrap();
        let expected = lr * 1.0 / (1.0 + 1e-8);
        for v in p.data() {
            assert!(((2.0 - v) - expected).abs() < 1e-15);
        }
        // equal grads → equal updates
        assert_eq!(p.data()[0], p.data()[1]);
    }

    #[test]
    fn shape_mismatch() {
        let mut opt = Optimizer::<f64>::sgd(0.1, 1.0).unwrap();
        let mut p = Tensor2::zeros(2, 2);
        let g = Tensor2::zeros(1, 4);
        assert!(opt.step(&mut p, &g).is_err());
        let mut opt = Optimizer::<f64>::adam(0.1).unwrap();
        assert!(opt.step(&mut p, &g).is_err());
    }

    #[test]
    fn clip_rescales() {
        let mut g = Tensor2::row_vector(vec![3.0f64, 4.0]);
        let n = clip_global_norm(&mut g, 1.0);
        assert_eq!(n, 5.0);
        assert!((g.global_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_hyperparameters() {
        assert!(Optimizer::<f64>::sgd(0.1, 0.0).is_err());
        assert!(Optimizer::<f64>::sgd(0.1, 1.5).is_err());
        assert!(Optimizer::<f64>::sgd(-1.0, 0.5).is_err());
    }
}
