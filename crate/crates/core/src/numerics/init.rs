use rand::Rng;

use super::{seeded_rng, Scalar, Tensor2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitScheme {
    /// U(-r, r) with r = sqrt(6 / (fan_in + fan_out)).
    UniformScaled,
    Zero,
}

pub fn uniform_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

/// Initialize a `rows x cols` tensor; `cols` is the fan-in, `rows` the fan-out.
pub fn init_params<T: Scalar>(rows: usize, cols: usize, scheme: InitScheme, seed: u64) -> Tensor2<T> {
    match scheme {
        InitScheme::Zero => Tensor2::zeros(rows, cols),
        InitScheme::UniformScaled => {
            let mut t = Tensor2::zeros(rows, cols);
            init_uniform(t.data_mut(), uniform_bound(cols, rows), seed);
            t
        }
    }
}

/// Fill `out` from U(-bound, bound). Values are drawn in `f64` and rounded,
/// so an `f32` and an `f64` tensor built from the same seed agree to `f32`
/// precision.
pub fn init_uniform<T: Scalar>(out: &mut [T], bound: f64, seed: u64) {
    let mut rng = seeded_rng(seed);
    for v in out.iter_mut() {
        let u: f64 = rng.gen_range(-bound..bound);
        *v = T::of(u);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_scheme() {
        let t: Tensor2<f32> = init_params(4, 7, InitScheme::Zero, 1);
        assert!(t.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn deterministic() {
        let a: Tensor2<f32> = init_params(10, 20, InitScheme::UniformScaled, 99);
        let b: Tensor2<f32> = init_params(10, 20, InitScheme::UniformScaled, 99);
        assert_eq!(a, b);
        let c: Tensor2<f32> = init_params(10, 20, InitScheme::UniformScaled, 100);
        assert_ne!(a, c);
    }

    #[test]
    fn bound_300x300() {
        let t: Tensor2<f64> = init_params(300, 300, InitScheme::UniformScaled, 5);
        let r = (6.0f64 / 600.0).sqrt();
        assert!(t.data().iter().all(|v| v.abs() < r));
        // not degenerate: the draws should reach close to the bound
        let max = t.data().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max > 0.9 * r);
    }
}
