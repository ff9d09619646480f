//! Coefficients of `f(eps, lambda) = det(lambda I - A(eps))` around
//! `(0, lambda0)`.
//!
//! The expansion `f(eps, lambda0 + mu) = sum a_ij eps^i mu^j` is computed two
//! ways: exactly, by fraction-free (Bareiss) elimination over the bivariate
//! polynomial ring `F[eps, mu]`, and in floating point, by evaluating the
//! determinant on a grid of roots of unity and inverting the 2-D DFT.

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{Complex64, Scalar, ToleranceConfig};
use crate::series::MatrixSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharpolyError {
    #[error(
        "eps-degree {requested} needs A_0..A_{requested}, but the series stops at A_{available}"
    )]
    InsufficientOrder { requested: usize, available: usize },
    #[error("lambda0 is not an eigenvalue of A(0) (det(lambda0 I - A_0) = {residual})")]
    NotAnEigenvalue { residual: String },
    #[error("lambda-degree {deg_lam} is too small to determine the multiplicity (n = {n})")]
    LambdaDegreeTooSmall { deg_lam: usize, n: usize },
    #[error("pinned multiplicity m = {pinned} disagrees with the characteristic polynomial (m = {computed})")]
    MultiplicityMismatch { pinned: usize, computed: usize },
}

/// Truncated coefficient table `a_ij`, `0 <= i <= deg_eps`, `0 <= j <= deg_lam`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharTable<S> {
    coeffs: Vec<Vec<S>>,
    scale: f64,
}

impl<S: Scalar> CharTable<S> {
    pub fn deg_eps(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn deg_lam(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    /// `a_ij`, or zero outside the table.
    pub fn get(&self, i: usize, j: usize) -> S {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.coeffs
    }

    /// Magnitude against which float entries are judged zero: the largest
    /// determinant sample used by the interpolation (1 in exact mode).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn negligible(&self, value: &S, tol: &ToleranceConfig) -> bool {
        negligible_at_scale(value, tol, self.scale)
    }
}

/// Partial derivatives of `f` at `(0, lambda0)` used by the coefficient
/// formulas, stored as the Taylor coefficients `a_10`, `a_0m`, `a_0,m+1`,
/// `a_11` and `a_20`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPartials<S> {
    pub m: usize,
    /// `df/deps`
    pub f_eps: S,
    /// `(1/m!) d^m f / d lambda^m`
    pub f_lam_m_over_mfact: S,
    /// `(1/(m+1)!) d^(m+1) f / d lambda^(m+1)`
    pub f_lam_m1_over_m1fact: S,
    /// `d^2 f / d lambda d eps`
    pub f_lam_eps: S,
    /// `(1/2) d^2 f / d eps^2`; absent when the series stops at `A_1`.
    pub f_eps2_over_2: Option<S>,
    /// See [`CharTable::scale`].
    pub scale: f64,
}

fn negligible_at_scale<S: Scalar>(value: &S, tol: &ToleranceConfig, scale: f64) -> bool {
    if S::EXACT {
        value.is_exact_zero()
    } else {
        value.magnitude() <= tol.zero_threshold * scale.max(1.0)
    }
}

impl<S: Scalar> CharPartials<S> {
    pub fn from_table(table: &CharTable<S>, m: usize) -> Self {
        Self {
            m,
            f_eps: table.get(1, 0),
            f_lam_m_over_mfact: table.get(0, m),
            f_lam_m1_over_m1fact: table.get(0, m + 1),
            f_lam_eps: table.get(1, 1),
            f_eps2_over_2: (table.deg_eps() >= 2).then(|| table.get(2, 0)),
            scale: table.scale,
        }
    }
}

/// Outcome of the characteristic-polynomial form of the generic condition.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericCheck<S> {
    pub holds: bool,
    /// `-f_eps / ((1/m!) d^m f / d lambda^m)`, which equals `alpha_1^m`.
    pub alpha1_pow_m: S,
}

/// Tests `df/deps (0, lambda0) != 0` and returns the value of `alpha_1^m`.
pub fn generic_condition_charpoly<S: Scalar>(
    partials: &CharPartials<S>,
    tol: &ToleranceConfig,
) -> GenericCheck<S> {
    let holds = !negligible_at_scale(&partials.f_eps, tol, partials.scale);
    let alpha1_pow_m = if partials.f_lam_m_over_mfact.is_exact_zero() {
        S::zero()
    } else {
        -partials.f_eps.clone() / partials.f_lam_m_over_mfact.clone()
    };
    GenericCheck {
        holds,
        alpha1_pow_m,
    }
}

/// Smallest `j` with `a_0j != 0`; that is the algebraic multiplicity of
/// `lambda0` as an eigenvalue of `A(0)`.
pub fn algebraic_multiplicity<S: Scalar>(
    table: &CharTable<S>,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<usize, CharpolyError> {
    let a00 = table.get(0, 0);
    if !table.negligible(&a00, tol) {
        return Err(CharpolyError::NotAnEigenvalue {
            residual: a00.to_string(),
        });
    }
    if table.deg_lam() < n {
        return Err(CharpolyError::LambdaDegreeTooSmall {
            deg_lam: table.deg_lam(),
            n,
        });
    }
    (1..=table.deg_lam())
        .find(|&j| !table.negligible(&table.get(0, j), tol))
        .ok_or(CharpolyError::LambdaDegreeTooSmall {
            deg_lam: table.deg_lam(),
            n,
        })
}

/// Table of `a_ij` for `i <= deg_eps`, `j <= deg_lam`, where
/// `f(eps, lambda0 + mu) = sum a_ij eps^i mu^j`.
pub fn bivariate_charpoly_truncated<S: Scalar>(
    series: &MatrixSeries<S>,
    lambda0: &S,
    deg_eps: usize,
    deg_lam: usize,
) -> Result<CharTable<S>, CharpolyError> {
    if deg_eps > series.order() {
        return Err(CharpolyError::InsufficientOrder {
            requested: deg_eps,
            available: series.order(),
        });
    }
    let truncated = series.truncated(deg_eps);
    let mut scale = 1.0;
    let full = if S::EXACT {
        bareiss_charpoly(&truncated, lambda0)
    } else {
        let lambda0 = lambda0.to_c64();
        let (grid, sample_scale) = interpolated_charpoly(&truncated.to_c64(), lambda0, deg_eps);
        scale = sample_scale;
        grid.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|z| S::from_c64(z).expect("float scalar"))
                    .collect()
            })
            .collect()
    };
    let coeffs = (0..=deg_eps)
        .map(|i| {
            (0..=deg_lam)
                .map(|j| {
                    full.get(i)
                        .and_then(|row: &Vec<S>| row.get(j))
                        .cloned()
                        .unwrap_or_else(S::zero)
                })
                .collect()
        })
        .collect();
    Ok(CharTable { coeffs, scale })
}

/// Multiplicity and partial derivatives in one call. The eps-degree is
/// `min(2, K)`; the lambda-degree covers the whole characteristic polynomial.
pub fn charpoly_partials<S: Scalar>(
    series: &MatrixSeries<S>,
    lambda0: &S,
    pinned_m: Option<usize>,
    tol: &ToleranceConfig,
) -> Result<(CharTable<S>, CharPartials<S>), CharpolyError> {
    let n = series.dim();
    let table = bivariate_charpoly_truncated(series, lambda0, series.order().min(2), n + 1)?;
    let m = algebraic_multiplicity(&table, n, tol)?;
    if let Some(pinned) = pinned_m {
        if pinned != m {
            return Err(CharpolyError::MultiplicityMismatch {
                pinned,
                computed: m,
            });
        }
    }
    let partials = CharPartials::from_table(&table, m);
    Ok((table, partials))
}

/// Characteristic polynomial `det(mu I - b) = sum c_j mu^j` by the
/// Faddeev-LeVerrier trace recursion. Returns `c_0, ..., c_n`.
pub fn faddeev_leverrier<S: Scalar>(b: &Matrix<S>) -> Vec<S> {
    let n = b.rows();
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut aux = Matrix::zeros(n, n);
    for k in 1..=n {
        // M_k = B M_{k-1} + c_{n-k+1} I
        let mut next = b.matmul(&aux).expect("square");
        for i in 0..n {
            next[(i, i)] = next[(i, i)].clone() + coeffs[n - k + 1].clone();
        }
        let tr = b.matmul(&next).expect("square").trace();
        coeffs[n - k] = -tr / S::from_i64(k as i64);
        aux = next;
    }
    coeffs
}

/// Dense bivariate polynomial, `coeffs[i][j]` multiplies `eps^i mu^j`.
#[derive(Debug, Clone, PartialEq)]
struct BiPoly<S> {
    coeffs: Vec<Vec<S>>,
}

impl<S: Scalar> BiPoly<S> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn constant(c: S) -> Self {
        Self {
            coeffs: vec![vec![c]],
        }
        .trimmed()
    }

    fn trimmed(mut self) -> Self {
        for row in &mut self.coeffs {
            while row.last().is_some_and(S::is_exact_zero) {
                row.pop();
            }
        }
        while self.coeffs.last().is_some_and(Vec::is_empty) {
            self.coeffs.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn get(&self, i: usize, j: usize) -> S {
        self.coeffs
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    fn add_term(&mut self, i: usize, j: usize, c: S) {
        if self.coeffs.len() <= i {
            self.coeffs.resize(i + 1, Vec::new());
        }
        let row = &mut self.coeffs[i];
        if row.len() <= j {
            row.resize(j + 1, S::zero());
        }
        row[j] = row[j].clone() + c;
    }

    /// Leading monomial in lex order with `eps` dominant.
    fn lead(&self) -> Option<(usize, usize)> {
        let i = self.coeffs.len().checked_sub(1)?;
        Some((i, self.coeffs[i].len() - 1))
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (i1, r1) in self.coeffs.iter().enumerate() {
            for (j1, c1) in r1.iter().enumerate() {
                if c1.is_exact_zero() {
                    continue;
                }
                for (i2, r2) in rhs.coeffs.iter().enumerate() {
                    for (j2, c2) in r2.iter().enumerate() {
                        if !c2.is_exact_zero() {
                            out.add_term(i1 + i2, j1 + j2, c1.clone() * c2.clone());
                        }
                    }
                }
            }
        }
        out.trimmed()
    }

    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (i, r) in rhs.coeffs.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                out.add_term(i, j, -c.clone());
            }
        }
        out.trimmed()
    }

    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }

    /// Exact quotient `self / divisor`; the division must leave no remainder.
    fn div_exact(&self, divisor: &Self) -> Self {
        let (a, b) = divisor.lead().expect("division by the zero polynomial");
        let lc = divisor.coeffs[a][b].clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((i, j)) = rem.lead() {
            assert!(i >= a && j >= b, "bivariate division is not exact");
            let c = rem.coeffs[i][j].clone() / lc.clone();
            quot.add_term(i - a, j - b, c.clone());
            let mut shifted = Self::zero();
            for (di, row) in divisor.coeffs.iter().enumerate() {
                for (dj, d) in row.iter().enumerate() {
                    if !d.is_exact_zero() {
                        shifted.add_term(di + i - a, dj + j - b, d.clone() * c.clone());
                    }
                }
            }
            rem = rem.sub(&shifted);
            // the leading term cancels exactly; drop it in case it is stored
            if rem.lead() == Some((i, j)) {
                rem.coeffs[i][j] = S::zero();
                rem = rem.trimmed();
            }
        }
        quot.trimmed()
    }
}

/// `det(mu I + lambda0 I - A(eps))` as a full bivariate polynomial.
fn bareiss_charpoly<S: Scalar>(series: &MatrixSeries<S>, lambda0: &S) -> Vec<Vec<S>> {
    let n = series.dim();
    let mut m: Vec<Vec<BiPoly<S>>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut p = BiPoly::zero();
                    for (k, a) in series.coefficients().iter().enumerate() {
                        p.add_term(k, 0, -a[(r, c)].clone());
                    }
                    if r == c {
                        p.add_term(0, 0, lambda0.clone());
                        p.add_term(0, 1, S::one());
                    }
                    p.trimmed()
                })
                .collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = BiPoly::constant(S::one());
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Vec::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = if negate { prev.neg() } else { prev };
    let width = det.coeffs.iter().map(Vec::len).max().unwrap_or(0);
    det.coeffs
        .iter()
        .enumerate()
        .map(|(i, _)| (0..width).map(|j| det.get(i, j)).collect())
        .collect()
}

/// Float route: sample the determinant on `(n d + 1) x (n + 1)` roots of
/// unity and recover the coefficients exactly up to rounding.
fn interpolated_charpoly(
    series: &MatrixSeries<Complex64>,
    lambda0: Complex64,
    deg_eps: usize,
) -> (Vec<Vec<Complex64>>, f64) {
    let n = series.dim();
    let n_eps = n * deg_eps + 1;
    let n_mu = n + 1;
    let root = |k: usize, count: usize| {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / count as f64)
    };
    let samples: Vec<Vec<Complex64>> = (0..n_eps)
        .map(|p| {
            let a = series.eval(&root(p, n_eps)).expect("square series");
            (0..n_mu)
                .map(|q| {
                    let shift = lambda0 + root(q, n_mu);
                    let m = a
                        .scale(&Complex64::new(-1.0, 0.0))
                        .shifted(&-shift)
                        .expect("square");
                    m.determinant().expect("square")
                })
                .collect()
        })
        .collect();
    let sample_scale = samples
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let scale = 1.0 / (n_eps * n_mu) as f64;
    let coeffs = (0..n_eps)
        .map(|i| {
            (0..n_mu)
                .map(|j| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (p, row) in samples.iter().enumerate() {
                        for (q, value) in row.iter().enumerate() {
                            acc += value
                                * root((i * p) % n_eps, n_eps).conj()
                                * root((j * q) % n_mu, n_mu).conj();
                        }
                    }
                    acc * scale
                })
                .collect()
        })
        .collect();
    (coeffs, sample_scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn m(rows: &[&[(i64, i64)]]) -> Matrix<Q> {
        Matrix::from_ratios(rows).unwrap()
    }

    fn demo_series(extra_zeros: usize) -> MatrixSeries<Q> {
        let a0 = m(&[
            &[(-1, 2), (1, 1), (1, 2)],
            &[(1, 2), (0, 1), (-1, 2)],
            &[(-1, 1), (1, 1), (1, 1)],
        ]);
        let a1 = Matrix::from_ints(&[&[2, 0, -1], &[2, 0, -1], &[1, 0, 0]]).unwrap();
        let mut coeffs = vec![a0, a1];
        coeffs.extend(std::iter::repeat_n(Matrix::zeros(3, 3), extra_zeros));
        MatrixSeries::new(coeffs).unwrap()
    }

    #[test]
    fn double_eigenvalue_coefficients() {
        let t = bivariate_charpoly_truncated(&demo_series(2), &Q::zero(), 3, 3).unwrap();
        // f = l^3 - 2 l^2 e - 1/2 l^2 + l e^2 - 1/2 l e + e^2 + 1/2 e
        let expect = [
            ((1, 0), Q::from_ratio(1, 2)),
            ((0, 2), Q::from_ratio(-1, 2)),
            ((0, 3), Q::one()),
            ((1, 1), Q::from_ratio(-1, 2)),
            ((2, 0), Q::one()),
            ((2, 1), Q::one()),
            ((1, 2), Q::from_i64(-2)),
            ((0, 0), Q::zero()),
            ((0, 1), Q::zero()),
            ((3, 0), Q::zero()),
        ];
        for ((i, j), v) in expect {
            assert_eq!(t.get(i, j), v, "a_{i}{j}");
        }
        assert_eq!(algebraic_multiplicity(&t, 3, &tol()).unwrap(), 2);
    }

    #[test]
    fn double_eigenvalue_float_interpolation() {
        let s = demo_series(2).to_c64();
        let t = bivariate_charpoly_truncated(&s, &Complex64::new(0.0, 0.0), 3, 3).unwrap();
        let exact = bivariate_charpoly_truncated(&demo_series(2), &Q::zero(), 3, 3).unwrap();
        for i in 0..=3 {
            for j in 0..=3 {
                assert!((t.get(i, j) - exact.get(i, j).to_c64()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn insufficient_order_is_an_error() {
        assert_eq!(
            bivariate_charpoly_truncated(&demo_series(0), &Q::zero(), 3, 3),
            Err(CharpolyError::InsufficientOrder {
                requested: 3,
                available: 1
            })
        );
    }

    #[test]
    fn diagonal_family() {
        // A(eps) = diag(eps, 1): f = (l - eps)(l - 1)
        let s = MatrixSeries::new(vec![
            Matrix::<Q>::from_ints(&[&[0, 0], &[0, 1]]).unwrap(),
            Matrix::from_ints(&[&[1, 0], &[0, 0]]).unwrap(),
        ])
        .unwrap();
        let t = bivariate_charpoly_truncated(&s, &Q::zero(), 1, 2).unwrap();
        assert_eq!(t.get(0, 0), Q::zero());
        assert_eq!(t.get(1, 0), Q::one());
        assert_eq!(t.get(0, 1), Q::from_i64(-1));
        assert_eq!(t.get(1, 1), Q::from_i64(-1));
        assert_eq!(algebraic_multiplicity(&t, 2, &tol()).unwrap(), 1);
    }

    #[test]
    fn sqrt_family_and_its_degenerate_variant() {
        let j2 = Matrix::<Q>::from_ints(&[&[0, 1], &[0, 0]]).unwrap();
        let e21 = Matrix::<Q>::from_ints(&[&[0, 0], &[1, 0]]).unwrap();
        // [[0,1],[eps,0]]: f = l^2 - eps
        let s = MatrixSeries::new(vec![j2.clone(), e21.clone()]).unwrap();
        let t = bivariate_charpoly_truncated(&s, &Q::zero(), 1, 2).unwrap();
        assert_eq!(t.get(1, 0), Q::from_i64(-1));
        assert_eq!(t.get(0, 2), Q::one());
        assert_eq!(t.get(1, 1), Q::zero());
        let p = CharPartials::from_table(&t, 2);
        let check = generic_condition_charpoly(&p, &tol());
        assert!(check.holds);
        assert_eq!(check.alpha1_pow_m, Q::one());
        // [[0,1],[eps^2,0]]: f = l^2 - eps^2, df/deps = 0 at the origin
        let s = MatrixSeries::new(vec![j2, Matrix::zeros(2, 2), e21]).unwrap();
        let (_, p) = charpoly_partials(&s, &Q::zero(), None, &tol()).unwrap();
        assert!(!generic_condition_charpoly(&p, &tol()).holds);
    }

    #[test]
    fn jordan_block_multiplicity() {
        let j3 = Matrix::<Q>::jordan_block(3, &Q::zero());
        let s = MatrixSeries::new(vec![j3]).unwrap();
        let t = bivariate_charpoly_truncated(&s, &Q::zero(), 0, 3).unwrap();
        assert_eq!(algebraic_multiplicity(&t, 3, &tol()).unwrap(), 3);
    }

    #[test]
    fn pinned_multiplicity_mismatch() {
        let err = charpoly_partials(&demo_series(1), &Q::zero(), Some(3), &tol()).unwrap_err();
        assert_eq!(
            err,
            CharpolyError::MultiplicityMismatch {
                pinned: 3,
                computed: 2
            }
        );
        let err = charpoly_partials(&demo_series(1), &Q::one(), None, &tol()).unwrap_err();
        assert!(matches!(err, CharpolyError::NotAnEigenvalue { .. }));
    }

    #[test]
    fn leverrier_matches_lambda_column() {
        let s = demo_series(0);
        let coeffs = faddeev_leverrier(s.coefficient(0).unwrap());
        let t = bivariate_charpoly_truncated(&s, &Q::zero(), 0, 3).unwrap();
        for (j, c) in coeffs.iter().enumerate() {
            assert_eq!(*c, t.get(0, j));
        }
    }
}
