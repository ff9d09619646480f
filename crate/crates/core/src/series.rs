//! Truncated Taylor data `A_0, ..., A_K` of an analytic matrix family.

use thiserror::Error;

use crate::linalg::{LinalgError, Matrix};
use crate::scalar::{Complex64, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("a matrix series needs at least the constant term A_0")]
    Empty,
    #[error("A_{index} is {rows}x{cols}, expected {n}x{n}")]
    BadShape {
        index: usize,
        rows: usize,
        cols: usize,
        n: usize,
    },
}

/// `A(eps) = sum_k A_k eps^k` with `A_k = (1/k!) d^k A / d eps^k (0)`.
///
/// Coefficients beyond the stored order are unknown, not zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeries<S> {
    coefficients: Vec<Matrix<S>>,
}

impl<S: Scalar> MatrixSeries<S> {
    pub fn new(coefficients: Vec<Matrix<S>>) -> Result<Self, SeriesError> {
        let first = coefficients.first().ok_or(SeriesError::Empty)?;
        let n = first.rows();
        for (index, a) in coefficients.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(SeriesError::BadShape {
                    index,
                    rows: a.rows(),
                    cols: a.cols(),
                    n,
                });
            }
        }
        Ok(Self { coefficients })
    }

    /// Matrix dimension `n`.
    pub fn dim(&self) -> usize {
        self.coefficients[0].rows()
    }

    /// Highest stored index `K`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> Option<&Matrix<S>> {
        self.coefficients.get(k)
    }

    pub fn coefficients(&self) -> &[Matrix<S>] {
        &self.coefficients
    }

    /// Keeps `A_0, ..., A_k` only.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            coefficients: self.coefficients[..=k.min(self.order())].to_vec(),
        }
    }

    /// Evaluates the stored polynomial part at `eps` (Horner).
    pub fn eval(&self, eps: &S) -> Result<Matrix<S>, LinalgError> {
        let mut acc = self.coefficients[self.order()].clone();
        for a in self.coefficients.iter().rev().skip(1) {
            acc = acc.scale(eps).add(a)?;
        }
        Ok(acc)
    }

    pub fn to_c64(&self) -> MatrixSeries<Complex64> {
        MatrixSeries {
            coefficients: self.coefficients.iter().map(Matrix::to_c64).collect(),
        }
    }
}
