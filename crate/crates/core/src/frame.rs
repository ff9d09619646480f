//! Similarity frame around a non-derogatory eigenvalue.
//!
//! A frame is an invertible `U` with
//! `U^-1 A_0 U = blockdiag(J_m(lambda0), W0)`, where `lambda0` is not an
//! eigenvalue of `W0`. Its first `m` columns form the Jordan chain
//! `u_1, ..., u_m`; the first `m` columns of `(U^-1)^*` are the left vectors
//! `v_1, ..., v_m`, so that `(v_i, u_j) = delta_ij`. The complement block
//! `W0` is kept as-is and never reduced to Jordan form.

use thiserror::Error;

use crate::linalg::{LinalgError, Matrix, Vector};
use crate::scalar::{Scalar, ToleranceConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("multiplicity m = {m} is invalid for a {n}x{n} matrix")]
    BadMultiplicity { m: usize, n: usize },
    #[error("lambda0 is not an eigenvalue of A_0")]
    NotAnEigenvalue,
    #[error("lambda0 has geometric multiplicity {geometric}; a single Jordan block is required")]
    NotSingleBlock { geometric: usize },
    #[error("Jordan chain construction failed: {0}")]
    ChainSolveFailed(String),
    #[error("lambda0 is an eigenvalue of the complementary block W0")]
    SingularComplement,
    #[error("pinned frame rejected: {0}")]
    InvalidPinnedFrame(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanFrame<S> {
    n: usize,
    m: usize,
    lambda0: S,
    u: Matrix<S>,
    u_inv: Matrix<S>,
    chain: Vec<Vector<S>>,
    left: Vec<Vector<S>>,
    lambda: Matrix<S>,
    w0: Matrix<S>,
}

/// Entries of `U^-1 A_1 U` that enter the generic condition and the
/// second-order coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ACoefficients<S> {
    /// `(v_m, A_1 u_1)`
    pub a_m1: S,
    /// `(v_{m-1}, A_1 u_1)`, for `m >= 2`
    pub a_m_minus_1_1: Option<S>,
    /// `(v_m, A_1 u_2)`, for `m >= 2`
    pub a_m2: Option<S>,
}

impl<S: Scalar> JordanFrame<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambda0(&self) -> &S {
        &self.lambda0
    }

    pub fn u_matrix(&self) -> &Matrix<S> {
        &self.u
    }

    pub fn u_inv(&self) -> &Matrix<S> {
        &self.u_inv
    }

    /// `Lambda = U blockdiag(J_m(0)^*, (W0 - lambda0 I)^-1) U^-1`.
    pub fn lambda_matrix(&self) -> &Matrix<S> {
        &self.lambda
    }

    pub fn w0(&self) -> &Matrix<S> {
        &self.w0
    }

    /// Chain vector `u_i`, 1-based (`1 <= i <= m`).
    pub fn u(&self, i: usize) -> &Vector<S> {
        &self.chain[i - 1]
    }

    /// Left vector `v_i`, 1-based (`1 <= i <= m`).
    pub fn v(&self, i: usize) -> &Vector<S> {
        &self.left[i - 1]
    }

    pub fn chain(&self) -> &[Vector<S>] {
        &self.chain
    }

    pub fn left_vectors(&self) -> &[Vector<S>] {
        &self.left
    }

    /// `(v_i, y)`, i.e. row `i` of `U^-1` applied to `y`.
    pub fn pair(&self, i: usize, y: &Vector<S>) -> S {
        self.left[i - 1].inner(y)
    }

    /// Builds a frame for `a0` at `lambda0` with multiplicity `m`.
    ///
    /// The chain starts from the kernel vector of `A_0 - lambda0 I`, scaled
    /// so its first nonzero entry (exact) or largest entry (float) is one,
    /// and continues by solving `(A_0 - lambda0 I) u_{i+1} = u_i`. The
    /// complement is spanned by the columns of `(A_0 - lambda0 I)^m`.
    pub fn build(
        a0: &Matrix<S>,
        lambda0: &S,
        m: usize,
        tol: &ToleranceConfig,
    ) -> Result<Self, FrameError> {
        let n = a0.rows();
        if !a0.is_square() || m == 0 || m > n {
            return Err(FrameError::BadMultiplicity { m, n });
        }
        let shifted = a0.shifted(lambda0)?;
        let kernel = shifted.kernel(tol);
        match kernel.len() {
            0 => return Err(FrameError::NotAnEigenvalue),
            1 => {}
            geometric => return Err(FrameError::NotSingleBlock { geometric }),
        }
        let u1 = normalize_generator(kernel.into_iter().next().expect("one kernel vector"));
        let mut chain = vec![u1];
        for step in 1..m {
            let prev = &chain[step - 1];
            let mut next = shifted.solve_particular(prev, tol).map_err(|_| {
                FrameError::ChainSolveFailed(format!(
                    "(A_0 - lambda0 I) u_{} = u_{} has no solution; the Jordan block is shorter than m = {m}",
                    step + 1,
                    step
                ))
            })?;
            if !S::EXACT {
                let u1 = &chain[0];
                let coef = u1.inner(&next) / u1.inner(u1);
                next = next - u1.scale(&coef);
                let resid = (shifted.mul_vec(&next)? - prev.clone()).norm();
                if resid > tol.rank_rel_threshold * (1.0 + prev.norm()) * (1.0 + a0.norm()) {
                    return Err(FrameError::ChainSolveFailed(format!(
                        "chain step {} residual {resid:e}",
                        step + 1
                    )));
                }
            }
            chain.push(next);
        }
        let complement = complement_basis(&shifted.pow(m as u32)?, n - m, tol)?;
        let columns: Vec<Vector<S>> = chain.iter().cloned().chain(complement).collect();
        let u = Matrix::from_columns(&columns)?;
        let u_inv = u.inverse(tol).map_err(|_| {
            FrameError::ChainSolveFailed("chain and complement are not independent".into())
        })?;
        let w0 = check_block_structure(a0, lambda0, m, &u, &u_inv, tol)
            .map_err(FrameError::ChainSolveFailed)?;
        Self::assemble(n, m, lambda0.clone(), u, u_inv, w0, tol)
    }

    /// Accepts a caller-supplied `U` after checking that it block-diagonalizes
    /// `a0` with a leading `J_m(lambda0)`.
    pub fn from_pinned(
        a0: &Matrix<S>,
        lambda0: &S,
        m: usize,
        u: Matrix<S>,
        tol: &ToleranceConfig,
    ) -> Result<Self, FrameError> {
        let n = a0.rows();
        if !a0.is_square() || m == 0 || m > n {
            return Err(FrameError::BadMultiplicity { m, n });
        }
        if u.rows() != n || u.cols() != n {
            return Err(FrameError::InvalidPinnedFrame(format!(
                "U is {}x{}, expected {n}x{n}",
                u.rows(),
                u.cols()
            )));
        }
        let u_inv = u
            .inverse(tol)
            .map_err(|e| FrameError::InvalidPinnedFrame(e.to_string()))?;
        let w0 = check_block_structure(a0, lambda0, m, &u, &u_inv, tol)
            .map_err(FrameError::InvalidPinnedFrame)?;
        Self::assemble(n, m, lambda0.clone(), u, u_inv, w0, tol)
    }

    fn assemble(
        n: usize,
        m: usize,
        lambda0: S,
        u: Matrix<S>,
        u_inv: Matrix<S>,
        w0: Matrix<S>,
        tol: &ToleranceConfig,
    ) -> Result<Self, FrameError> {
        let lambda = lambda_matrix(&u, &u_inv, m, &lambda0, &w0, tol)?;
        let chain = (0..m).map(|j| u.column(j)).collect();
        let left = (0..m).map(|i| u_inv.row(i).conj()).collect();
        Ok(Self {
            n,
            m,
            lambda0,
            u,
            u_inv,
            chain,
            left,
            lambda,
            w0,
        })
    }

    /// `(v_m, A_1 u_1)`, `(v_{m-1}, A_1 u_1)` and `(v_m, A_1 u_2)`.
    pub fn a_coefficients(&self, a1: &Matrix<S>) -> Result<ACoefficients<S>, FrameError> {
        let m = self.m;
        let a1u1 = a1.mul_vec(self.u(1))?;
        let a_m1 = self.pair(m, &a1u1);
        let (a_m_minus_1_1, a_m2) = if m >= 2 {
            let a1u2 = a1.mul_vec(self.u(2))?;
            (Some(self.pair(m - 1, &a1u1)), Some(self.pair(m, &a1u2)))
        } else {
            (None, None)
        };
        Ok(ACoefficients {
            a_m1,
            a_m_minus_1_1,
            a_m2,
        })
    }

    /// Lists every frame invariant that fails for `a0`: block structure,
    /// biorthogonality and the identities satisfied by `Lambda`. Float mode
    /// allows a residual norm of `1e-9 (1 + |A_0|)`.
    pub fn invariant_violations(&self, a0: &Matrix<S>) -> Vec<String> {
        let mut failures = Vec::new();
        let bound = 1e-9 * (1.0 + a0.norm());
        let bad = |v: &Vector<S>| {
            if S::EXACT {
                v.iter().any(|x| !x.is_exact_zero())
            } else {
                v.norm() > bound
            }
        };
        let n = self.n;
        let shifted = a0.shifted(&self.lambda0).expect("square");
        let transformed = self
            .u_inv
            .matmul(&a0.matmul(&self.u).expect("square"))
            .expect("square");
        let mut target =
            Matrix::block_diag(&[&Matrix::jordan_block(self.m, &self.lambda0), &self.w0]);
        target = transformed.sub(&target).expect("square");
        if (0..n).any(|j| bad(&target.column(j))) {
            failures.push("U^-1 A_0 U is not blockdiag(J_m(lambda0), W0)".into());
        }
        for i in 1..=self.m {
            for j in 1..=self.m {
                let delta = if i == j { S::one() } else { S::zero() };
                if bad(&Vector(vec![self.pair(i, self.u(j)) - delta])) {
                    failures.push(format!("(v_{i}, u_{j}) != delta"));
                }
            }
        }
        let lam = &self.lambda;
        let lam_shift = lam.matmul(&shifted).expect("square");
        for i in 0..n {
            let col = lam_shift.mul_vec(&self.u.column(i)).expect("square");
            let expected = if i == 0 {
                Vector::zeros(n)
            } else {
                self.u.column(i)
            };
            if bad(&(col - expected)) {
                failures.push(format!("Lambda (A_0 - lambda0 I) U e_{} is wrong", i + 1));
            }
        }
        for i in 1..=self.m {
            let image = lam.mul_vec(self.u(i)).expect("square");
            let expected = if i == self.m {
                Vector::zeros(n)
            } else {
                self.u(i + 1).clone()
            };
            if bad(&(image - expected)) {
                failures.push(format!("Lambda u_{i} is wrong"));
            }
        }
        let lam_star = lam.conj_transpose();
        for i in 1..=self.m {
            let image = lam_star.mul_vec(self.v(i)).expect("square");
            let expected = if i == 1 {
                Vector::zeros(n)
            } else {
                self.v(i - 1).clone()
            };
            if bad(&(image - expected)) {
                failures.push(format!("Lambda^* v_{i} is wrong"));
            }
        }
        failures
    }
}

/// `U blockdiag(J_m(0)^*, (W0 - lambda0 I)^-1) U^-1`.
pub fn lambda_matrix<S: Scalar>(
    u: &Matrix<S>,
    u_inv: &Matrix<S>,
    m: usize,
    lambda0: &S,
    w0: &Matrix<S>,
    tol: &ToleranceConfig,
) -> Result<Matrix<S>, FrameError> {
    let lower_shift = Matrix::jordan_block(m, &S::zero()).conj_transpose();
    let middle = if w0.rows() == 0 {
        lower_shift
    } else {
        let resolvent = w0.shifted(lambda0)?.inverse(tol).map_err(|e| match e {
            LinalgError::SingularMatrix { .. } => FrameError::SingularComplement,
            other => FrameError::Linalg(other),
        })?;
        Matrix::block_diag(&[&lower_shift, &resolvent])
    };
    Ok(u.matmul(&middle)?.matmul(u_inv)?)
}

fn normalize_generator<S: Scalar>(v: Vector<S>) -> Vector<S> {
    let pivot = if S::EXACT {
        v.iter().find(|x| !x.is_exact_zero()).cloned()
    } else {
        let max = v.max_abs();
        v.iter().find(|x| x.magnitude() == max).cloned()
    };
    match pivot {
        Some(p) => v.scale(&p.inv()),
        None => v,
    }
}

/// `count` independent columns spanning the range of `power`. Exact mode
/// takes the pivot columns; float mode runs column-pivoted Gram-Schmidt.
fn complement_basis<S: Scalar>(
    power: &Matrix<S>,
    count: usize,
    tol: &ToleranceConfig,
) -> Result<Vec<Vector<S>>, FrameError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let rank_error = |rank: usize| {
        FrameError::ChainSolveFailed(format!(
            "range of (A_0 - lambda0 I)^m has dimension {rank}, expected {count}"
        ))
    };
    if S::EXACT {
        let ech = power.rref(tol);
        if ech.pivots.len() != count {
            return Err(rank_error(ech.pivots.len()));
        }
        return Ok(ech.pivots.iter().map(|&c| power.column(c)).collect());
    }
    let rank = power.rank(tol);
    if rank != count {
        return Err(rank_error(rank));
    }
    let mut remaining: Vec<Vector<S>> = (0..power.cols()).map(|c| power.column(c)).collect();
    let mut basis: Vec<Vector<S>> = Vec::with_capacity(count);
    for _ in 0..count {
        let (best, _) = remaining
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let chosen = remaining.swap_remove(best);
        let norm = chosen.norm();
        let q = chosen.scale(&S::from_c64((1.0 / norm).into()).expect("float"));
        for v in &mut remaining {
            let coef = q.inner(v);
            *v = v.clone() - q.scale(&coef);
        }
        basis.push(q);
    }
    Ok(basis)
}

/// Checks `U^-1 A_0 U = blockdiag(J_m(lambda0), W0)` and returns `W0`.
fn check_block_structure<S: Scalar>(
    a0: &Matrix<S>,
    lambda0: &S,
    m: usize,
    u: &Matrix<S>,
    u_inv: &Matrix<S>,
    tol: &ToleranceConfig,
) -> Result<Matrix<S>, String> {
    let n = a0.rows();
    let t = u_inv
        .matmul(&a0.matmul(u).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let bound = tol.rank_rel_threshold * (1.0 + a0.norm()) * (1.0 + u.norm() * u_inv.norm());
    let negligible = |x: &S| {
        if S::EXACT {
            x.is_exact_zero()
        } else {
            x.magnitude() <= bound
        }
    };
    let jordan = Matrix::jordan_block(m, lambda0);
    for i in 0..n {
        for j in 0..n {
            let ok = match (i < m, j < m) {
                (true, true) => negligible(&(t[(i, j)].clone() - jordan[(i, j)].clone())),
                (false, false) => true,
                _ => negligible(&t[(i, j)]),
            };
            if !ok {
                return Err(format!(
                    "entry ({}, {}) of U^-1 A_0 U is {}, breaking the block structure",
                    i + 1,
                    j + 1,
                    t[(i, j)]
                ));
            }
        }
    }
    Ok(t.block(m, m, n - m, n - m))
}
