use std::fmt;

use super::Scalar;
use crate::{Error, Result};

/// Row-major dense matrix. Vectors (biases) are stored as `1 x n`.
#[derive(Clone, PartialEq)]
pub struct Tensor2<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Tensor2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tensor2")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> Tensor2<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(
                format!("{} values for {rows}x{cols}", rows * cols),
                data.len(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn row_vector(values: Vec<T>) -> Self {
        Self {
            rows: 1,
            cols: values.len(),
            data: values,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn fill(&mut self, v: T) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn sum_squares(&self) -> T {
        self.data.iter().map(|&v| v * v).sum()
    }

    pub fn scale(&mut self, alpha: T) {
        self.data.iter_mut().for_each(|v| *v *= alpha);
    }

    /// `self += alpha * other`
    pub fn add_scaled(&mut self, other: &Self, alpha: T) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
        Ok(())
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::shape(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }

    /// `out = self · x` (rows of `self` dotted with `x`).
    pub fn matvec(&self, x: &[T], out: &mut [T]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (r, o) in out.iter_mut().enumerate() {
            *o = super::dot(self.row(r), x);
        }
    }

    /// `out += self · x`
    pub fn matvec_acc(&self, x: &[T], out: &mut [T]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (r, o) in out.iter_mut().enumerate() {
            *o += super::dot(self.row(r), x);
        }
    }

    /// `out += selfᵀ · y`
    pub fn tmatvec_acc(&self, y: &[T], out: &mut [T]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        for (r, &yr) in y.iter().enumerate() {
            if yr != T::zero() {
                super::axpy(yr, self.row(r), out);
            }
        }
    }

    /// `self += y · xᵀ`
    pub fn outer_acc(&mut self, y: &[T], x: &[T]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(x.len(), self.cols);
        for (r, &yr) in y.iter().enumerate() {
            if yr != T::zero() {
                super::axpy(yr, x, self.row_mut(r));
            }
        }
    }

    pub fn cast<U: Scalar>(&self) -> Tensor2<U> {
        Tensor2 {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| U::of(v.as_f64())).collect(),
        }
    }
}

/// A model's trainable tensors, enumerated in a fixed order with stable names.
///
/// The same type doubles as its own gradient container: a zeroed clone of a
/// model holds that model's gradients.
pub trait Params<T: Scalar> {
    fn tensors(&self) -> Vec<(String, &Tensor2<T>)>;
    fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor2<T>)>;

    fn zero(&mut self) {
        for (_, t) in self.tensors_mut() {
            t.fill(T::zero());
        }
    }

    fn zeros_like(&self) -> Self
    where
        Self: Clone,
    {
        let mut g = self.clone();
        g.zero();
        g
    }

    fn num_params(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }

    fn global_norm(&self) -> T {
        self.tensors()
            .iter()
            .map(|(_, t)| t.sum_squares())
            .sum::<T>()
            .sqrt()
    }

    /// `self += alpha * other`, tensor by tensor.
    fn accumulate(&mut self, other: &Self, alpha: T) -> Result<()> {
        let src = other.tensors();
        let dst = self.tensors_mut();
        if src.len() != dst.len() {
            return Err(Error::shape(dst.len(), src.len()));
        }
        for ((_, d), (_, s)) in dst.into_iter().zip(src) {
            d.add_scaled(s, alpha)?;
        }
        Ok(())
    }

    fn scale_all(&mut self, alpha: T) {
        for (_, t) in self.tensors_mut() {
            t.scale(alpha);
        }
    }
}

impl<T: Scalar> Params<T> for Tensor2<T> {
    fn tensors(&self) -> Vec<(String, &Tensor2<T>)> {
        vec![("tensor".to_string(), self)]
    }

    fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor2<T>)> {
        vec![("tensor".to_string(), self)]
    }
}

/// Prefix every name from `inner` with `prefix.`.
pub(crate) fn prefixed<'a, T>(
    prefix: &str,
    inner: Vec<(String, &'a Tensor2<T>)>,
) -> impl Iterator<Item = (String, &'a Tensor2<T>)> + use<'a, T> {
    let prefix = prefix.to_string();
    inner
        .into_iter()
        .map(move |(n, t)| (format!("{prefix}.{n}"), t))
}

pub(crate) fn prefixed_mut<'a, T>(
    prefix: &str,
    inner: Vec<(String, &'a mut Tensor2<T>)>,
) -> impl Iterator<Item = (String, &'a mut Tensor2<T>)> + use<'a, T> {
    let prefix = prefix.to_string();
    inner
        .into_iter()
        .map(move |(n, t)| (format!("{prefix}.{n}"), t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_checks_length() {
        assert!(Tensor2::<f64>::new(2, 3, vec![0.0; 5]).is_err());
        assert!(Tensor2::<f64>::new(2, 3, vec![0.0; 6]).is_ok());
    }

    #[test]
    fn matvec_and_transpose() {
        let m = Tensor2::new(2, 3, vec![1.0f64, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let mut out = vec![0.0; 2];
        m.matvec(&[1.0, 0.0, -1.0], &mut out);
        assert_eq!(out, vec![-2.0, -2.0]);
        let mut back = vec![0.0; 3];
        m.tmatvec_acc(&[1.0, 1.0], &mut back);
        assert_eq!(back, vec![5.0, 7.0, 9.0]);
    }

    #[test]
    fn outer_accumulates() {
        let mut m = Tensor2::<f64>::zeros(2, 2);
        m.outer_acc(&[1.0, 2.0], &[3.0, 4.0]);
        assert_eq!(m.data(), &[3.0, 4.0, 6.0, 8.0]);
    }
}
