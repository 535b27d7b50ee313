use rand::seq::index::sample;

use super::{seeded_rng, Params};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct GradCheckOptions {
    pub epsilon: f64,
    /// Coordinates probed per tensor; tensors at or below this size are probed exhaustively.
    pub max_coords_per_tensor: usize,
    pub seed: u64,
}

impl Default for GradCheckOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-5,
            max_coords_per_tensor: 32,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub max_rel_err: f64,
    pub per_tensor: Vec<(String, f64)>,
    pub coords_checked: usize,
}

impl GradCheckReport {
    pub fn worst(&self) -> Option<&(String, f64)> {
        self.per_tensor
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Compare `analytic` gradients against central differences of `loss`.
///
/// Error per coordinate is `|a − n| / max(1, |a|, |n|)`. `params` is restored
/// to its original values before returning.
pub fn grad_check<P, F>(params: &mut P, analytic: &P, mut loss: F, opts: GradCheckOptions) -> Result<GradCheckReport>
where
    P: Params<f64>,
    F: FnMut(&P) -> Result<f64>,
{
    if !(1e-7..=1e-3).contains(&opts.epsilon) {
        return Err(Error::invalid(format!(
            "epsilon {} outside [1e-7, 1e-3]",
            opts.epsilon
        )));
    }
    let grads: Vec<(String, Vec<f64>)> = analytic
        .tensors()
        .into_iter()
        .map(|(n, t)| (n, t.data().to_vec()))
        .collect();
    let shapes: Vec<usize> = params.tensors().iter().map(|(_, t)| t.len()).collect();
    if shapes.len() != grads.len() || shapes.iter().zip(&grads).any(|(&s, g)| s != g.1.len()) {
        return Err(Error::shape("gradients matching parameters", "different layout"));
    }

    let base = loss(params)?;
    if !base.is_finite() {
        return Err(Error::NonFinite("loss".into()));
    }

    let mut rng = seeded_rng(opts.seed);
    let eps = opts.epsilon;
    let mut report = GradCheckReport {
        max_rel_err: 0.0,
        per_tensor: Vec::with_capacity(grads.len()),
        coords_checked: 0,
    };

    for (k, (name, grad)) in grads.iter().enumerate() {
        let len = shapes[k];
        let coords: Vec<usize> = if len <= opts.max_coords_per_tensor {
            (0..len).collect()
        } else {
            sample(&mut rng, len, opts.max_coords_per_tensor).into_vec()
        };
        let mut worst = 0.0f64;
        for j in coords {
            let orig = params.tensors()[k].1.data()[j];
            params.tensors_mut()[k].1.data_mut()[j] = orig + eps;
            let plus = loss(params)?;
            params.tensors_mut()[k].1.data_mut()[j] = orig - eps;
            let minus = loss(params)?;
            params.tensors_mut()[k].1.data_mut()[j] = orig;
            if !plus.is_finite() || !minus.is_finite() {
                return Err(Error::NonFinite(format!("loss at {name}[{j}]")));
            }
            let numeric = (plus - minus) / (2.0 * eps);
            let a = grad[j];
            let err = (a - numeric).abs() / 1f64.max(a.abs()).max(numeric.abs());
            worst = worst.max(err);
            report.coords_checked += 1;
        }
        report.max_rel_err = report.max_rel_err.max(worst);
        report.per_tensor.push((name.clone(), worst));
    }
    Ok(report)
}
