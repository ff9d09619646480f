//! Dense matrices and vectors over a [`Scalar`] field.
//!
//! Elimination routines pick pivots deterministically: the first nonzero
//! entry in exact mode, the largest-magnitude entry in float mode. Float rank
//! decisions treat a pivot as zero when it falls below
//! `rank_rel_threshold * (largest row norm)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::{Complex64, Scalar, ToleranceConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular (rank {rank} < {size})")]
    SingularMatrix { rank: usize, size: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
}

/// Column vector.
#[derive(Clone, PartialEq)]
pub struct Vector<S>(pub Vec<S>);

impl<S: Scalar> Vector<S> {
    pub fn zeros(n: usize) -> Self {
        Self(vec![S::zero(); n])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = S::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }

    /// Standard inner product `(x, y) = x^* y`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> S {
        assert_eq!(
            self.len(),
            other.len(),
            "inner product of mismatched vectors"
        );
        self.0
            .iter()
            .zip(&other.0)
            .fold(S::zero(), |acc, (x, y)| acc + x.conj() * y.clone())
    }

    /// Bilinear product `x^T y`.
    pub fn dot(&self, other: &Self) -> S {
        assert_eq!(self.len(), other.len(), "dot product of mismatched vectors");
        self.0
            .iter()
            .zip(&other.0)
            .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self(self.0.iter().map(|x| x.clone() * factor.clone()).collect())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(Scalar::conj).collect())
    }

    /// Euclidean norm (approximate in exact mode).
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .map(|x| x.magnitude().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: &ToleranceConfig) -> bool {
        self.0.iter().all(|x| x.is_negligible(tol))
    }

    pub fn to_c64(&self) -> Vector<Complex64> {
        Vector(self.0.iter().map(Scalar::to_c64).collect())
    }
}

impl<S: Scalar> Add for Vector<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.len(), rhs.len(), "adding mismatched vectors");
        Self(self.0.into_iter().zip(rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<S: Scalar> Sub for Vector<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.len(), rhs.len(), "subtracting mismatched vectors");
        Self(self.0.into_iter().zip(rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl<S: Scalar> Neg for Vector<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.into_iter().map(|a| -a).collect())
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S> IndexMut<usize> for Vector<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.0[i]
    }
}

impl<S: fmt::Debug> fmt::Debug for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[S]> = (0..self.rows)
            .map(|i| &self.data[i * self.cols..(i + 1) * self.cols])
            .collect();
        write!(f, "Matrix{rows:?}")
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
            return Err(LinalgError::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {ncols}",
                rows[bad].len()
            )));
        }
        Self::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integer ratios `(numer, denom)`.
    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| S::from_ratio(p, q)).collect())
                .collect(),
        )
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&p| S::from_i64(p)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    /// Jordan block `J_m(lambda)`: `lambda` on the diagonal, ones above it.
    pub fn jordan_block(m: usize, lambda: &S) -> Self {
        Self::from_fn(m, m, |i, j| {
            if i == j {
                lambda.clone()
            } else if j == i + 1 {
                S::one()
            } else {
                S::zero()
            }
        })
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diag(blocks: &[&Matrix<S>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(n, n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(offset + i, offset + j)] = b[(i, j)].clone();
                }
            }
            offset += b.rows;
        }
        out
    }

    pub fn from_columns(columns: &[Vector<S>]) -> Result<Self, LinalgError> {
        let rows = columns.first().map_or(0, Vector::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::DimensionMismatch(
                "columns of unequal length".into(),
            ));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| {
            columns[j][i].clone()
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vector<S> {
        Vector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        Vector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Sub-block starting at `(r0, c0)` of the given size.
    pub fn block(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Self {
        Self::from_fn(nrows, ncols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs[(k, j)].clone();
                    let cell = &mut out[(i, j)];
                    *cell = cell.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector<S>) -> Result<Vector<S>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(Vector(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols).fold(S::zero(), |acc, j| {
                        if v[j].is_exact_zero() {
                            acc
                        } else {
                            acc + self[(i, j)].clone() * v[j].clone()
                        }
                    })
                })
                .collect(),
        ))
    }

    fn zip_with(&self, rhs: &Self, op: impl Fn(S, S) -> S) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| op(a.clone(), b.clone()))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| x.clone() * factor.clone())
                .collect(),
        }
    }

    /// `self - shift * I`.
    pub fn shifted(&self, shift: &S) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "shift of a non-square matrix".into(),
            ));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] = out[(i, i)].clone() - shift.clone();
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "power of a non-square matrix".into(),
            ));
        }
        let mut out = Self::identity(self.rows);
        for _ in 0..exp {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Frobenius norm (approximate in exact mode).
    pub fn norm(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.magnitude().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: &ToleranceConfig) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_c64(&self) -> Matrix<Complex64> {
        self.map(Scalar::to_c64)
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).0).collect()
    }

    fn largest_row_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).norm())
            .fold(0.0, f64::max)
    }

    /// Reduced row echelon form.
    pub fn rref(&self, tol: &ToleranceConfig) -> Echelon<S> {
        let mut m = self.clone();
        let threshold = tol.rank_rel_threshold * self.largest_row_norm();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = select_pivot(&m, row, col, threshold) else {
                if !S::EXACT {
                    for r in row..m.rows {
                        m[(r, col)] = S::zero();
                    }
                }
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv();
            for j in col..m.cols {
                m[(row, j)] = m[(row, j)].clone() * inv.clone();
            }
            m[(row, col)] = S::one();
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_exact_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in col..m.cols {
                    let delta = factor.clone() * m[(row, j)].clone();
                    m[(r, j)] = m[(r, j)].clone() - delta;
                }
                m[(r, col)] = S::zero();
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self, tol: &ToleranceConfig) -> usize {
        self.rref(tol).pivots.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel(&self, tol: &ToleranceConfig) -> Vec<Vector<S>> {
        let ech = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = Vector::zeros(self.cols);
                v[f] = S::one();
                for (r, &p) in ech.pivots.iter().enumerate() {
                    v[p] = -ech.reduced[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// A particular solution of a possibly singular system `self x = b`,
    /// with every free variable set to zero.
    pub fn solve_particular(
        &self,
        b: &Vector<S>,
        tol: &ToleranceConfig,
    ) -> Result<Vector<S>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let augmented = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let ech = augmented.rref(tol);
        if ech.pivots.contains(&self.cols) {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = Vector::zeros(self.cols);
        for (r, &p) in ech.pivots.iter().enumerate() {
            x[p] = ech.reduced[(r, self.cols)].clone();
        }
        Ok(x)
    }

    pub fn inverse(&self, tol: &ToleranceConfig) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let augmented = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let ech = augmented.rref(tol);
        let rank = ech.pivots.iter().filter(|&&p| p < n).count();
        if rank < n {
            return Err(LinalgError::SingularMatrix { rank, size: n });
        }
        Ok(ech.reduced.block(0, n, n, n))
    }

    /// Determinant by elimination. No rank threshold is applied.
    pub fn determinant(&self) -> Result<S, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = select_pivot(&m, col, col, 0.0) else {
                return Ok(S::zero());
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            let inv = pivot.inv();
            for r in col + 1..n {
                if m[(r, col)].is_exact_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone() * inv.clone();
                for j in col..n {
                    let delta = factor.clone() * m[(col, j)].clone();
                    m[(r, j)] = m[(r, j)].clone() - delta;
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

fn select_pivot<S: Scalar>(
    m: &Matrix<S>,
    from_row: usize,
    col: usize,
    threshold: f64,
) -> Option<usize> {
    if S::EXACT {
        (from_row..m.rows).find(|&r| !m[(r, col)].is_exact_zero())
    } else {
        let (best, mag) = (from_row..m.rows)
            .map(|r| (r, m[(r, col)].magnitude()))
            .fold((from_row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (mag > threshold && mag > 0.0).then_some(best)
    }
}

/// Result of [`Matrix::rref`].
#[derive(Debug, Clone)]
pub struct Echelon<S> {
    pub reduced: Matrix<S>,
    /// Pivot columns, in row order.
    pub pivots: Vec<usize>,
}

/// Solves `m x = b` for square invertible `m`.
pub fn solve_linear<S: Scalar>(
    m: &Matrix<S>,
    b: &Vector<S>,
    tol: &ToleranceConfig,
) -> Result<Vector<S>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch(
            "solve with a non-square matrix".into(),
        ));
    }
    let rank = m.rank(tol);
    if rank < m.rows() {
        return Err(LinalgError::SingularMatrix {
            rank,
            size: m.rows(),
        });
    }
    m.solve_particular(b, tol)
}

impl<S: Scalar> Mul<&Vector<S>> for &Matrix<S> {
    type Output = Vector<S>;
    /// Panics on dimension mismatch; use [`Matrix::mul_vec`] for a checked product.
    fn mul(self, rhs: &Vector<S>) -> Vector<S> {
        self.mul_vec(rhs).expect("matrix-vector dimension mismatch")
    }
}
