use crate::numerics::{init_uniform, derive_seed, sigmoid, uniform_bound, Params, Scalar, Tensor2};
use crate::{Error, Result};

/// LSTM weights with the four gates stacked row-wise in the order
/// input, forget, cell candidate, output: `w` is `4h x d_in`, `u` is
/// `4h x h`, `b` is `1 x 4h`.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams<T> {
    pub w: Tensor2<T>,
    pub u: Tensor2<T>,
    pub b: Tensor2<T>,
}

/// Everything the backward pass needs from one forward step.
#[derive(Debug, Clone)]
pub struct LstmStep<T> {
    pub h: Vec<T>,
    pub c: Vec<T>,
    x: Vec<T>,
    h_prev: Vec<T>,
    c_prev: Vec<T>,
    /// Post-activation gates `[i, f, g, o]`.
    gates: Vec<T>,
    tanh_c: Vec<T>,
}

impl<T: Scalar> LstmParams<T> {
    /// Gate blocks drawn UNIFORM_SCALED per block; forget-gate bias 1, other biases 0.
    pub fn new(input_width: usize, hidden_width: usize, seed: u64) -> Self {
        let h = hidden_width;
        let mut w = Tensor2::zeros(4 * h, input_width);
        let mut u = Tensor2::zeros(4 * h, h);
        let wb = uniform_bound(input_width, h);
        let ub = uniform_bound(h, h);
        for gate in 0..4 {
            let rows = gate * h..(gate + 1) * h;
            init_uniform(
                &mut w.data_mut()[rows.start * input_width..rows.end * input_width],
                wb,
                derive_seed(seed, 2 * gate as u64),
            );
            init_uniform(
                &mut u.data_mut()[rows.start * h..rows.end * h],
                ub,
                derive_seed(seed, 2 * gate as u64 + 1),
            );
        }
        let mut b = Tensor2::zeros(1, 4 * h);
        b.data_mut()[h..2 * h].fill(T::one());
        Self { w, u, b }
    }

    pub fn zeros(input_width: usize, hidden_width: usize) -> Self {
        Self {
            w: Tensor2::zeros(4 * hidden_width, input_width),
            u: Tensor2::zeros(4 * hidden_width, hidden_width),
            b: Tensor2::zeros(1, 4 * hidden_width),
        }
    }

    pub fn input_width(&self) -> usize {
        self.w.cols()
    }

    pub fn hidden_width(&self) -> usize {
        self.u.cols()
    }

    /// Checked step: widths must agree and inputs must be finite.
    pub fn step(&self, x: &[T], h_prev: &[T], c_prev: &[T]) -> Result<LstmStep<T>> {
        let h = self.hidden_width();
        if x.len() != self.input_width() || h_prev.len() != h || c_prev.len() != h {
            return Err(Error::shape(
                format!("x:{} h:{h} c:{h}", self.input_width()),
                format!("x:{} h:{} c:{}", x.len(), h_prev.len(), c_prev.len()),
            ));
        }
        if x.iter().chain(h_prev).chain(c_prev).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("lstm step input".into()));
        }
        Ok(self.forward(x, h_prev, c_prev))
    }

    pub fn forward(&self, x: &[T], h_prev: &[T], c_prev: &[T]) -> LstmStep<T> {
        let h = self.hidden_width();
        let mut a = self.b.data().to_vec();
        self.w.matvec_acc(x, &mut a);
        self.u.matvec_acc(h_prev, &mut a);
        for v in &mut a[..2 * h] {
            *v = sigmoid(*v);
        }
        for v in &mut a[2 * h..3 * h] {
            *v = v.tanh();
        }
        for v in &mut a[3 * h..] {
            *v = sigmoid(*v);
        }
        let mut c = vec![T::zero(); h];
        let mut tanh_c = vec![T::zero(); h];
        let mut hn = vec![T::zero(); h];
        for k in 0..h {
            let (i, f, g, o) = (a[k], a[h + k], a[2 * h + k], a[3 * h + k]);
            c[k] = f * c_prev[k] + i * g;
            tanh_c[k] = c[k].tanh();
            hn[k] = o * tanh_c[k];
        }
        LstmStep {
            h: hn,
            c,
            x: x.to_vec(),
            h_prev: h_prev.to_vec(),
            c_prev: c_prev.to_vec(),
            gates: a,
            tanh_c,
        }
    }

    /// Backpropagate `dh`, `dc` (gradients w.r.t. this step's outputs).
    /// Parameter gradients and `dx` (if given) are accumulated; `dh_prev`
    /// and `dc_prev` are overwritten.
    pub fn backward(
        &self,
        step: &LstmStep<T>,
        dh: &[T],
        dc: &[T],
        grads: &mut LstmParams<T>,
        dx: Option<&mut [T]>,
        dh_prev: &mut [T],
        dc_prev: &mut [T],
    ) {
        let h = self.hidden_width();
        let one = T::one();
        let a = &step.gates;
        let mut da = vec![T::zero(); 4 * h];
        for k in 0..h {
            let (i, f, g, o) = (a[k], a[h + k], a[2 * h + k], a[3 * h + k]);
            let tc = step.tanh_c[k];
            let dct = dc[k] + dh[k] * o * (one - tc * tc);
            da[k] = dct * g * i * (one - i);
            da[h + k] = dct * step.c_prev[k] * f * (one - f);
            da[2 * h + k] = dct * i * (one - g * g);
            da[3 * h + k] = dh[k] * tc * o * (one - o);
            dc_prev[k] = dct * f;
        }
        grads.w.outer_acc(&da, &step.x);
        grads.u.outer_acc(&da, &step.h_prev);
        for (gb, &d) in grads.b.data_mut().iter_mut().zip(&da) {
            *gb += d;
        }
        if let Some(dx) = dx {
            self.w.tmatvec_acc(&da, dx);
        }
        dh_prev.fill(T::zero());
        self.u.tmatvec_acc(&da, dh_prev);
    }
}

impl<T: Scalar> Params<T> for LstmParams<T> {
    fn tensors(&self) -> Vec<(String, &Tensor2<T>)> {
        vec![("w".into(), &self.w), ("u".into(), &self.u), ("b".into(), &self.b)]
    }

    fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor2<T>)> {
        vec![
            ("w".into(), &mut self.w),
            ("u".into(), &mut self.u),
            ("b".into(), &mut self.b),
        ]
    }
}

/// One LSTM step: returns `(h, c)`.
pub fn lstm_step<T: Scalar>(params: &LstmParams<T>, x: &[T], h_prev: &[T], c_prev: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    let s = params.step(x, h_prev, c_prev)?;
    Ok((s.h, s.c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{grad_check, GradCheckOptions};

    #[test]
    fn zero_weights_give_zero_hidden() {
        let p = LstmParams::<f64>::zeros(3, 4);
        let (h, c) = lstm_step(&p, &[1.0, -2.0, 0.5], &[0.0; 4], &[0.0; 4]).unwrap();
        assert!(h.iter().all(|&v| v == 0.0));
        assert!(c.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn closed_input_gate_keeps_cell_empty() {
        let mut p = LstmParams::<f64>::new(3, 4, 1);
        // input gate rows: zero weights, bias -50
        for r in 0..4 {
            p.w.row_mut(r).fill(0.0);
            p.u.row_mut(r).fill(0.0);
            p.b.data_mut()[r] = -50.0;
        }
        let (h, c) = lstm_step(&p, &[0.3, 0.1, -0.2], &[0.0; 4], &[0.0; 4]).unwrap();
        assert!(c.iter().all(|v| v.abs() < 1e-20));
        assert!(h.iter().all(|v| v.abs() < 1e-20));
    }

    #[test]
    fn hidden_bounded() {
        let p = LstmParams::<f64>::new(5, 6, 3);
        let (h, _) = lstm_step(&p, &[10.0, -10.0, 3.0, 4.0, 5.0], &[0.9; 6], &[5.0; 6]).unwrap();
        assert!(h.iter().all(|v| v.abs() < 1.0));
    }

    #[test]
    fn rejects_non_finite_and_bad_widths() {
        let p = LstmParams::<f64>::new(2, 2, 0);
        assert!(matches!(
            lstm_step(&p, &[f64::NAN, 0.0], &[0.0; 2], &[0.0; 2]),
            Err(Error::NonFinite(_))
        ));
        assert!(lstm_step(&p, &[0.0], &[0.0; 2], &[0.0; 2]).is_err());
    }

    #[test]
    fn forget_bias_is_one() {
        let p = LstmParams::<f32>::new(2, 3, 0);
        assert_eq!(&p.b.data()[3..6], &[1.0, 1.0, 1.0]);
        assert!(p.b.data()[..3].iter().all(|&v| v == 0.0));
    }

    // Two steps, loss = Σ r·h₂ + Σ s·c₂, gradient w.r.t. every tensor.
    #[test]
    fn two_step_gradients() {
        let mut p = LstmParams::<f64>::new(3, 4, 11);
        p.b.data_mut().iter_mut().enumerate().for_each(|(i, v)| *v += 0.05 * i as f64);
        let x1 = [0.4, -0.3, 0.8];
        let x2 = [-0.6, 0.2, 0.1];
        let r = [0.7, -1.1, 0.4, 0.9];
        let s = [0.3, 0.2, -0.5, 0.1];
        let h0 = [0.1, -0.2, 0.05, 0.3];
        let c0 = [0.2, 0.1, -0.3, 0.0];
        let loss = |p: &LstmParams<f64>| -> Result<f64> {
            let a = p.forward(&x1, &h0, &c0);
            let b = p.forward(&x2, &a.h, &a.c);
            Ok(b.h.iter().zip(&r).map(|(h, r)| h * r).sum::<f64>()
                + b.c.iter().zip(&s).map(|(c, s)| c * s).sum::<f64>())
        };
        let a = p.forward(&x1, &h0, &c0);
        let b = p.forward(&x2, &a.h, &a.c);
        let mut g = LstmParams::zeros(3, 4);
        let (mut dh1, mut dc1) = (vec![0.0; 4], vec![0.0; 4]);
        p.backward(&b, &r, &s, &mut g, None, &mut dh1, &mut dc1);
        let (mut dh0, mut dc0) = (vec![0.0; 4], vec![0.0; 4]);
        p.backward(&a, &dh1, &dc1, &mut g, None, &mut dh0, &mut dc0);
        let rep = grad_check(&mut p, &g, loss, GradCheckOptions { max_coords_per_tensor: 1000, ..Default::default() }).unwrap();
        assert!(rep.max_rel_err < 1e-8, "{rep:?}");
    }
}
