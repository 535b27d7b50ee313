use std::ops::Range;

use crate::numerics::Scalar;

/// Windows `[i·s, i·s + n)` for every `i` with `i·s < len`.
pub fn chunk_windows(len: usize, n: usize, s: usize) -> Vec<Range<usize>> {
    assert!(n >= 1 && s >= 1, "chunk size and stride must be positive");
    (0..len).step_by(s).map(|start| start..start + n).collect()
}

/// Cut `vectors` into windows; positions past the end are zero vectors.
pub fn chunk<T: Scalar>(vectors: &[Vec<T>], n: usize, s: usize) -> Vec<Vec<Vec<T>>> {
    let width = vectors.first().map_or(0, Vec::len);
    chunk_windows(vectors.len(), n, s)
        .into_iter()
        .map(|w| {
            w.map(|i| vectors.get(i).cloned().unwrap_or_else(|| vec![T::zero(); width]))
                .collect()
        })
        .collect()
}

/// Index one past the last vector that is not all zeros.
pub fn true_length<T: Scalar>(vectors: &[Vec<T>]) -> usize {
    vectors
        .iter()
        .rposition(|v| v.iter().any(|&x| x != T::zero()))
        .map_or(0, |p| p + 1)
}
