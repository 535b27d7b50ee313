use rand::seq::SliceRandom;

use crate::numerics::seeded_rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitSize {
    /// Fraction of items held out, rounded to the nearest count.
    Fraction(f64),
    Count(usize),
}

/// Shuffle `0..n` with `seed` and cut off a test set. Both index lists are
/// returned sorted.
pub fn holdout_indices(n: usize, size: SplitSize, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    let n_test = match size {
        SplitSize::Fraction(f) => {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::invalid(format!("hold-out fraction {f} not in (0, 1)")));
            }
            let k = (f * n as f64).round() as usize;
            if n >= 2 {
                k.clamp(1, n - 1)
            } else {
                k.min(n)
            }
        }
        SplitSize::Count(k) => {
            if k > n {
                return Err(Error::invalid(format!("hold-out count {k} exceeds {n} items")));
            }
            k
        }
    };
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut seeded_rng(seed));
    let mut test = idx[..n_test].to_vec();
    let mut train = idx[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    Ok((train, test))
}
