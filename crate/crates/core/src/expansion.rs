//! Puiseux expansions of the eigenvalues and eigenvectors near `lambda0`.
//!
//! With `t = zeta^h eps^(1/m)` the branches are
//! `lambda_h(eps) = lambda0 + sum_k alpha_k t^k` and
//! `x_h(eps) = sum_k beta_k t^k`, normalized by `(v_1, x_h) = 1`.
//! The coefficients are produced one order at a time: extend `r`, compute
//! `alpha_{s}`, extend the `p` table by one row, then compute `beta_{s}`.

use thiserror::Error;

use crate::charpoly::{charpoly_partials, generic_condition_charpoly, CharPartials, CharpolyError};
use crate::combinatorics::{CombinatoricsError, PolyTables};
use crate::frame::{FrameError, JordanFrame};
use crate::linalg::{LinalgError, Matrix, Vector};
use crate::scalar::{mth_root, Complex64, Scalar, ScalarError, ToleranceConfig};
use crate::series::MatrixSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExpansionError {
    #[error("generic condition fails: -f_eps/(f_lam^(m)/m!) = {charpoly_value}, (v_m, A_1 u_1) = {a_m1_value}")]
    GenericConditionFails {
        charpoly_value: String,
        a_m1_value: String,
    },
    #[error("lambda0 has geometric multiplicity {geometric}; the generic condition cannot hold")]
    NotSingleBlock { geometric: usize },
    #[error("A_{needed} is required but the series stops at A_{available}")]
    MissingMatrixCoefficient { needed: usize, available: usize },
    #[error("the two generic-condition routes disagree: charpoly gives {charpoly_value}, the frame gives {a_m1_value}")]
    RouteDisagreement {
        charpoly_value: String,
        a_m1_value: String,
    },
    #[error("expansion order must be at least 1")]
    ZeroOrder,
    #[error("branch {h} is out of range for m = {m}")]
    BranchOutOfRange { h: usize, m: usize },
    #[error("exact evaluation needs zeta and eps^(1/m) in the Gaussian rationals (m = {m})")]
    ExactEvaluationUnavailable { m: usize },
    #[error(transparent)]
    Charpoly(#[from] CharpolyError),
    #[error(transparent)]
    Frame(FrameError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<FrameError> for ExpansionError {
    fn from(e: FrameError) -> Self {
        match e {
            FrameError::NotSingleBlock { geometric } => {
                ExpansionError::NotSingleBlock { geometric }
            }
            other => ExpansionError::Frame(other),
        }
    }
}

/// Highest matrix index needed for an expansion through order `n`:
/// `floor((m + n - 1) / m)`.
pub fn required_matrix_order(m: usize, n: usize) -> usize {
    (m + n - 1) / m
}

fn coefficient<S: Scalar>(
    series: &MatrixSeries<S>,
    k: usize,
) -> Result<&Matrix<S>, ExpansionError> {
    series
        .coefficient(k)
        .ok_or(ExpansionError::MissingMatrixCoefficient {
            needed: k,
            available: series.order(),
        })
}

/// Both forms of the generic condition evaluated side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericConditionRoutes<S> {
    /// `-f_eps / ((1/m!) d^m f / d lambda^m)`
    pub charpoly_value: S,
    /// `(v_m, A_1 u_1)`
    pub a_m1_value: S,
    pub holds_charpoly: bool,
    pub holds_frame: bool,
}

impl<S: Scalar> GenericConditionRoutes<S> {
    pub fn evaluate(
        partials: &CharPartials<S>,
        frame: &JordanFrame<S>,
        a1: &Matrix<S>,
        tol: &ToleranceConfig,
    ) -> Result<Self, ExpansionError> {
        let check = generic_condition_charpoly(partials, tol);
        let a_m1_value = frame.a_coefficients(a1)?.a_m1;
        Ok(Self {
            holds_charpoly: check.holds,
            holds_frame: !a_m1_value.is_negligible(tol),
            charpoly_value: check.alpha1_pow_m,
            a_m1_value,
        })
    }

    pub fn holds(&self) -> bool {
        self.holds_charpoly && self.holds_frame
    }

    /// Verdicts agree, and when the condition holds the two values agree
    /// (exactly, or to `route_rel_threshold` in float mode).
    pub fn agree(&self, tol: &ToleranceConfig) -> bool {
        self.holds_charpoly == self.holds_frame
            && (!self.holds_charpoly
                || self
                    .charpoly_value
                    .approx_eq(&self.a_m1_value, tol.route_rel_threshold))
    }

    fn into_error(self) -> ExpansionError {
        let charpoly_value = self.charpoly_value.to_string();
        let a_m1_value = self.a_m1_value.to_string();
        if self.holds_charpoly != self.holds_frame || self.holds() {
            ExpansionError::RouteDisagreement {
                charpoly_value,
                a_m1_value,
            }
        } else {
            ExpansionError::GenericConditionFails {
                charpoly_value,
                a_m1_value,
            }
        }
    }
}

/// `alpha_1`, the chosen `m`-th root of `(v_m, A_1 u_1)`.
pub fn alpha_one<S: Scalar>(
    frame: &JordanFrame<S>,
    a1: &Matrix<S>,
    branch: usize,
    tol: &ToleranceConfig,
) -> Result<S, ExpansionError> {
    let a_m1 = frame.a_coefficients(a1)?.a_m1;
    if a_m1.is_negligible(tol) {
        return Err(ExpansionError::GenericConditionFails {
            charpoly_value: "not computed".into(),
            a_m1_value: a_m1.to_string(),
        });
    }
    Ok(mth_root(&a_m1, frame.m() as u32, branch as u32, tol)?)
}

/// Incremental driver. After `s` steps it holds `alpha_1..alpha_s`,
/// `beta_0..beta_s`, `p` rows `0..=s` and `r_1..r_{s-1}`.
#[derive(Debug, Clone)]
pub struct ExpansionState<'a, S: Scalar> {
    series: &'a MatrixSeries<S>,
    frame: JordanFrame<S>,
    tables: PolyTables<S>,
    betas: Vec<Vector<S>>,
    root_branch: usize,
}

impl<'a, S: Scalar> ExpansionState<'a, S> {
    /// Runs step 1: `alpha_1`, `p` row 1, `beta_0 = u_1` and `beta_1`.
    pub fn new(
        series: &'a MatrixSeries<S>,
        frame: JordanFrame<S>,
        root_branch: usize,
        tol: &ToleranceConfig,
    ) -> Result<Self, ExpansionError> {
        let a1 = coefficient(series, 1)?;
        let alpha1 = alpha_one(&frame, a1, root_branch, tol)?;
        let mut tables = PolyTables::new(frame.m());
        tables.push_alpha(alpha1)?;
        let betas = vec![frame.u(1).clone()];
        let mut state = Self {
            series,
            frame,
            tables,
            betas,
            root_branch,
        };
        let beta1 = state.next_beta(1)?;
        state.betas.push(beta1);
        Ok(state)
    }

    /// Current order `s`.
    pub fn s(&self) -> usize {
        self.tables.order()
    }

    pub fn frame(&self) -> &JordanFrame<S> {
        &self.frame
    }

    pub fn tables(&self) -> &PolyTables<S> {
        &self.tables
    }

    pub fn alphas(&self) -> &[S] {
        self.tables.alphas()
    }

    pub fn betas(&self) -> &[Vector<S>] {
        &self.betas
    }

    /// Matrix coefficients consumed so far: `A_0..A_floor((m+s-1)/m)`.
    pub fn matrices_used(&self) -> usize {
        required_matrix_order(self.frame.m(), self.s())
    }

    /// Advances from order `s` to `s + 1`.
    pub fn step(&mut self) -> Result<(), ExpansionError> {
        let s = self.s() + 1;
        self.tables.extend_r()?;
        let alpha = self.next_alpha(s)?;
        self.tables.push_alpha(alpha)?;
        let beta = self.next_beta(s)?;
        self.betas.push(beta);
        Ok(())
    }

    /// `alpha_s` for `s >= 2`; needs the state through `s - 1` and `r_{s-1}`.
    pub fn next_alpha(&self, s: usize) -> Result<S, ExpansionError> {
        assert!(s >= 2 && self.s() == s - 1 && self.tables.r_len() >= s - 1);
        let m = self.frame.m();
        let tables = &self.tables;
        let mut acc = -tables.r(s - 1).clone();
        for i in 0..s.min(m) {
            for j in i..s {
                let p = tables.p(j, i);
                if p.is_exact_zero() {
                    continue;
                }
                let top = (m + s - 1 - j) / m;
                let mut w = Vector::zeros(self.frame.n());
                for k in 1..=top {
                    let a_k = coefficient(self.series, k)?;
                    w = w + a_k * &self.betas[m + s - 1 - j - k * m];
                }
                acc = acc + p.clone() * self.frame.pair(m - i, &w);
            }
        }
        let alpha1 = tables.alpha(1);
        Ok(acc / (S::from_i64(m as i64) * alpha1.pow(m as u32 - 1)))
    }

    /// `beta_s` for `s >= 1`; needs `alpha_s` and `p` row `s`.
    pub fn next_beta(&self, s: usize) -> Result<Vector<S>, ExpansionError> {
        assert!(s >= 1 && self.s() >= s && self.betas.len() >= s);
        let m = self.frame.m();
        let n = self.frame.n();
        let tables = &self.tables;
        let mut beta = Vector::zeros(n);
        for i in 0..=s.min(m - 1) {
            beta = beta + self.frame.u(i + 1).scale(tables.p(s, i));
        }
        if s >= m {
            let lam = self.frame.lambda_matrix();
            for j in 0..=(s - m) {
                let mut w = Vector::zeros(n);
                for l in 1..=(s - j) / m {
                    let a_l = coefficient(self.series, l)?;
                    w = w + a_l * &self.betas[s - j - l * m];
                }
                // sum_k p_{j,k} Lambda^{k+1} w
                let mut y = lam * &w;
                for k in 0..=j {
                    let p = tables.p(j, k);
                    if !p.is_exact_zero() {
                        beta = beta - y.scale(p);
                    }
                    if k < j {
                        y = lam * &y;
                    }
                }
            }
        }
        Ok(beta)
    }

    pub fn into_expansion(self) -> PuiseuxExpansion<S> {
        PuiseuxExpansion {
            lambda0: self.frame.lambda0().clone(),
            m: self.frame.m(),
            alphas: self.tables.alphas().to_vec(),
            betas: self.betas,
            root_branch: self.root_branch,
            frame: self.frame,
        }
    }
}

/// Options for [`expand`].
#[derive(Debug, Clone, Default)]
pub struct ExpandOptions<S> {
    /// Expected multiplicity; a mismatch with the characteristic polynomial
    /// is an error.
    pub pinned_m: Option<usize>,
    /// A frame `U` to use instead of the constructed one.
    pub pinned_frame: Option<Matrix<S>>,
    pub tol: ToleranceConfig,
}

/// Result of [`expand`] together with the data used to validate it.
#[derive(Debug, Clone)]
pub struct ExpansionOutcome<S> {
    pub expansion: PuiseuxExpansion<S>,
    pub partials: CharPartials<S>,
    pub routes: GenericConditionRoutes<S>,
}

pub type Prepared<S> = (CharPartials<S>, JordanFrame<S>, GenericConditionRoutes<S>);

/// Multiplicity, frame and both generic-condition routes for `series` at
/// `lambda0`, without expanding.
pub fn prepare<S: Scalar>(
    series: &MatrixSeries<S>,
    lambda0: &S,
    options: &ExpandOptions<S>,
) -> Result<Prepared<S>, ExpansionError> {
    let tol = &options.tol;
    let a1 = coefficient(series, 1)?;
    let (_, partials) = charpoly_partials(series, lambda0, options.pinned_m, tol)?;
    let m = partials.m;
    let a0 = coefficient(series, 0)?;
    let frame = match &options.pinned_frame {
        Some(u) => JordanFrame::from_pinned(a0, lambda0, m, u.clone(), tol)?,
        None => JordanFrame::build(a0, lambda0, m, tol)?,
    };
    let routes = GenericConditionRoutes::evaluate(&partials, &frame, a1, tol)?;
    Ok((partials, frame, routes))
}

/// Expansion through order `order` on root branch `branch`.
///
/// The generic condition is checked through the characteristic polynomial
/// and through `(v_m, A_1 u_1)`; the two must agree.
pub fn expand<S: Scalar>(
    series: &MatrixSeries<S>,
    lambda0: &S,
    order: usize,
    branch: usize,
    options: &ExpandOptions<S>,
) -> Result<ExpansionOutcome<S>, ExpansionError> {
    if order == 0 {
        return Err(ExpansionError::ZeroOrder);
    }
    let (partials, frame, routes) = prepare(series, lambda0, options)?;
    if !routes.holds() || !routes.agree(&options.tol) {
        return Err(routes.into_error());
    }
    let needed = required_matrix_order(frame.m(), order);
    if needed > series.order() {
        return Err(ExpansionError::MissingMatrixCoefficient {
            needed,
            available: series.order(),
        });
    }
    let expansion = expand_with_frame(series, frame, order, branch, &options.tol)?;
    Ok(ExpansionOutcome {
        expansion,
        partials,
        routes,
    })
}

/// Runs the recursion in a given frame, skipping the route comparison.
pub fn expand_with_frame<S: Scalar>(
    series: &MatrixSeries<S>,
    frame: JordanFrame<S>,
    order: usize,
    branch: usize,
    tol: &ToleranceConfig,
) -> Result<PuiseuxExpansion<S>, ExpansionError> {
    if order == 0 {
        return Err(ExpansionError::ZeroOrder);
    }
    let mut state = ExpansionState::new(series, frame, branch, tol)?;
    while state.s() < order {
        state.step()?;
    }
    Ok(state.into_expansion())
}

/// Coefficients of the `m` Puiseux branches through a fixed order.
#[derive(Debug, Clone)]
pub struct PuiseuxExpansion<S> {
    pub lambda0: S,
    pub m: usize,
    /// `alpha_1..alpha_N`
    pub alphas: Vec<S>,
    /// `beta_0..beta_N`
    pub betas: Vec<Vector<S>>,
    /// Which `m`-th root of `(v_m, A_1 u_1)` was taken as `alpha_1`.
    pub root_branch: usize,
    pub frame: JordanFrame<S>,
}

impl<S: Scalar> PuiseuxExpansion<S> {
    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    /// `zeta = exp(2 pi i / m)` if it is a scalar of this field.
    pub fn zeta(&self) -> Option<S> {
        S::root_of_unity(self.m as u32, 1)
    }

    /// Eigenvalue coefficients of branch `h` in powers of `eps^(1/m)`:
    /// entry `k - 1` is `(h k mod m, alpha_k)`, meaning `alpha_k zeta^(h k mod m)`.
    pub fn branch_terms(&self, h: usize) -> Vec<(usize, S)> {
        self.alphas
            .iter()
            .enumerate()
            .map(|(i, a)| ((h * (i + 1)) % self.m, a.clone()))
            .collect()
    }

    /// `(lambda_h(eps), x_h(eps))` in the field itself. `eps_root_branch`
    /// picks `eps^(1/m)`; possible only when `zeta` and that root are
    /// representable.
    pub fn evaluate_branch(
        &self,
        h: usize,
        eps: &S,
        eps_root_branch: usize,
        tol: &ToleranceConfig,
    ) -> Result<(S, Vector<S>), ExpansionError> {
        let m = self.m;
        if h >= m || eps_root_branch >= m {
            return Err(ExpansionError::BranchOutOfRange {
                h: h.max(eps_root_branch),
                m,
            });
        }
        if eps.is_exact_zero() {
            return Ok((self.lambda0.clone(), self.betas[0].clone()));
        }
        let zeta = self
            .zeta()
            .ok_or(ExpansionError::ExactEvaluationUnavailable { m })?;
        let root = match mth_root(eps, m as u32, eps_root_branch as u32, tol) {
            Ok(r) => r,
            Err(ScalarError::ExactRootNotRepresentable { .. }) => {
                return Err(ExpansionError::ExactEvaluationUnavailable { m })
            }
            Err(e) => return Err(e.into()),
        };
        let t = zeta.pow(h as u32) * root;
        Ok(sum_series(&self.lambda0, &self.alphas, &self.betas, &t))
    }

    /// Floating-point evaluation, available for every `m`.
    pub fn evaluate_branch_c64(
        &self,
        h: usize,
        eps: Complex64,
        eps_root_branch: usize,
    ) -> (Complex64, Vector<Complex64>) {
        let m = self.m as u32;
        let phase = 2.0 * std::f64::consts::PI * ((h + eps_root_branch) % self.m) as f64 / m as f64;
        let t = if eps == Complex64::new(0.0, 0.0) {
            eps
        } else {
            let principal = eps.root_branch(m, 0).expect("complex roots always exist");
            principal * Complex64::from_polar(1.0, phase)
        };
        let alphas: Vec<Complex64> = self.alphas.iter().map(S::to_c64).collect();
        let betas: Vec<Vector<Complex64>> = self.betas.iter().map(Vector::to_c64).collect();
        sum_series(&self.lambda0.to_c64(), &alphas, &betas, &t)
    }

    /// Residuals of the order-by-order eigen-equation
    /// `(A_0 - lambda0 I) beta_s + sum_{k=1}^s (A_{k/m} - alpha_k I) beta_{s-k}`
    /// for `s = 0..=N`, where `A_{k/m} = 0` unless `m` divides `k`.
    pub fn eigen_equation_residuals(
        &self,
        series: &MatrixSeries<S>,
    ) -> Result<Vec<Vector<S>>, ExpansionError> {
        let m = self.m;
        let shifted = coefficient(series, 0)?.shifted(&self.lambda0)?;
        (0..=self.order())
            .map(|s| {
                let mut res = &shifted * &self.betas[s];
                for k in 1..=s {
                    let prev = &self.betas[s - k];
                    if k % m == 0 {
                        res = res + coefficient(series, k / m)? * prev;
                    }
                    res = res - prev.scale(&self.alphas[k - 1]);
                }
                Ok(res)
            })
            .collect()
    }

    /// Largest eigen-equation residual norm; zero means exact agreement.
    pub fn max_eigen_equation_residual(
        &self,
        series: &MatrixSeries<S>,
    ) -> Result<f64, ExpansionError> {
        Ok(self
            .eigen_equation_residuals(series)?
            .iter()
            .map(Vector::norm)
            .fold(0.0, f64::max))
    }

    /// `(v_1, beta_s)` for every `s`; the normalization asks for `1, 0, 0, ...`.
    pub fn normalization_values(&self) -> Vec<S> {
        self.betas.iter().map(|b| self.frame.pair(1, b)).collect()
    }
}

fn sum_series<S: Scalar>(lambda0: &S, alphas: &[S], betas: &[Vector<S>], t: &S) -> (S, Vector<S>) {
    let mut lambda = lambda0.clone();
    let mut x = betas[0].clone();
    let mut power = S::one();
    for (k, alpha) in alphas.iter().enumerate() {
        power = power * t.clone();
        lambda = lambda + alpha.clone() * power.clone();
        x = x + betas[k + 1].scale(&power);
    }
    (lambda, x)
}

/// Closed second-order coefficients, with `alpha_2` in both of its forms.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrder<S> {
    pub alpha1: S,
    /// Inner-product form.
    pub alpha2: S,
    /// Characteristic-polynomial form.
    pub alpha2_charpoly: S,
    pub beta0: Vector<S>,
    pub beta1: Vector<S>,
    pub beta2: Vector<S>,
}

/// `alpha_1, alpha_2, beta_0, beta_1, beta_2` without running the
/// recursion. `a2` is required when `m = 1`; `partials` must carry
/// `f_eps2_over_2` in that case.
pub fn second_order_closed_form<S: Scalar>(
    frame: &JordanFrame<S>,
    a1: &Matrix<S>,
    a2: Option<&Matrix<S>>,
    partials: &CharPartials<S>,
    branch: usize,
    tol: &ToleranceConfig,
) -> Result<SecondOrder<S>, ExpansionError> {
    let m = frame.m();
    let alpha1 = alpha_one(frame, a1, branch, tol)?;
    let coeffs = frame.a_coefficients(a1)?;
    let lam = frame.lambda_matrix();
    let u1 = frame.u(1);
    let a_0m = &partials.f_lam_m_over_mfact;
    let a_0m1 = &partials.f_lam_m1_over_m1fact;
    let a11 = &partials.f_lam_eps;
    let mm = S::from_i64(m as i64);
    let (alpha2, alpha2_charpoly, beta1, beta2) = if m == 1 {
        let a2 = a2.ok_or(ExpansionError::MissingMatrixCoefficient {
            needed: 2,
            available: 1,
        })?;
        let a20 =
            partials
                .f_eps2_over_2
                .clone()
                .ok_or(ExpansionError::MissingMatrixCoefficient {
                    needed: 2,
                    available: 1,
                })?;
        let lam_a1 = lam.matmul(a1)?;
        let a1_lam_a1 = a1.matmul(&lam_a1)?;
        let alpha2 = frame.pair(1, &(&a2.sub(&a1_lam_a1)? * u1));
        let alpha2_cp =
            -(alpha1.clone() * alpha1.clone() * a_0m1.clone() + alpha1.clone() * a11.clone() + a20)
                / a_0m.clone();
        let beta1 = -(&lam_a1 * u1);
        let op = lam
            .matmul(a2)?
            .scale(&-S::one())
            .add(&lam_a1.matmul(&lam_a1)?)?
            .sub(&lam.matmul(&lam_a1)?.scale(&alpha1))?;
        (alpha2, alpha2_cp, beta1, &op * u1)
    } else {
        let sum =
            coeffs.a_m_minus_1_1.clone().expect("m >= 2") + coeffs.a_m2.clone().expect("m >= 2");
        let alpha2 = sum / (mm.clone() * alpha1.pow(m as u32 - 2));
        let alpha2_cp = -(alpha1.pow(m as u32 + 1) * a_0m1.clone() + alpha1.clone() * a11.clone())
            / (mm * alpha1.pow(m as u32 - 1) * a_0m.clone());
        let beta1 = frame.u(2).scale(&alpha1);
        let beta2 = if m == 2 {
            -(lam * &(a1 * u1)) + frame.u(2).scale(&alpha2)
        } else {
            frame.u(2).scale(&alpha2) + frame.u(3).scale(&(alpha1.clone() * alpha1.clone()))
        };
        (alpha2, alpha2_cp, beta1, beta2)
    };
    if !alpha2.approx_eq(&alpha2_charpoly, tol.route_rel_threshold) {
        return Err(ExpansionError::RouteDisagreement {
            charpoly_value: alpha2_charpoly.to_string(),
            a_m1_value: alpha2.to_string(),
        });
    }
    Ok(SecondOrder {
        alpha1,
        alpha2,
        alpha2_charpoly,
        beta0: u1.clone(),
        beta1,
        beta2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn demo_series(zeros: usize) -> MatrixSeries<Q> {
        let a0 = Matrix::from_ratios(&[
            &[(-1, 2), (1, 1), (1, 2)],
            &[(1, 2), (0, 1), (-1, 2)],
            &[(-1, 1), (1, 1), (1, 1)],
        ])
        .unwrap();
        let a1 = Matrix::from_ints(&[&[2, 0, -1], &[2, 0, -1], &[1, 0, 0]]).unwrap();
        let mut coeffs = vec![a0, a1];
        coeffs.extend((0..zeros).map(|_| Matrix::zeros(3, 3)));
        MatrixSeries::new(coeffs).unwrap()
    }

    fn demo_options() -> ExpandOptions<Q> {
        ExpandOptions {
            pinned_m: Some(2),
            pinned_frame: Some(Matrix::from_ints(&[&[1, 1, 1], &[0, 1, 1], &[1, 1, 0]]).unwrap()),
            tol: tol(),
        }
    }

    fn qv(v: &[(i64, i64)]) -> Vector<Q> {
        Vector(v.iter().map(|&(p, q)| Q::from_ratio(p, q)).collect())
    }

    #[test]
    fn demo_second_order() {
        let series = demo_series(0);
        let out = expand(&series, &Q::zero(), 2, 0, &demo_options()).unwrap();
        let e = &out.expansion;
        assert_eq!(e.alphas, vec![Q::one(), Q::from_ratio(1, 2)]);
        assert_eq!(e.betas[0], qv(&[(1, 1), (0, 1), (1, 1)]));
        assert_eq!(e.betas[1], qv(&[(1, 1), (1, 1), (1, 1)]));
        assert_eq!(e.betas[2], qv(&[(1, 2), (1, 2), (1, 2)]));
        assert_eq!(out.routes.charpoly_value, Q::one());
        assert_eq!(out.routes.a_m1_value, Q::one());
        assert_eq!(e.max_eigen_equation_residual(&series).unwrap(), 0.0);
    }

    #[test]
    fn demo_fifth_order_needs_zero_matrices() {
        let short = demo_series(0);
        assert_eq!(
            expand(&short, &Q::zero(), 5, 0, &demo_options()).unwrap_err(),
            ExpansionError::MissingMatrixCoefficient {
                needed: 3,
                available: 1
            }
        );
        let series = demo_series(2);
        let e = expand(&series, &Q::zero(), 5, 0, &demo_options())
            .unwrap()
            .expansion;
        let expected: Vec<Q> = [(1, 1), (1, 2), (1, 8), (0, 1), (-1, 128)]
            .iter()
            .map(|&(p, q)| Q::from_ratio(p, q))
            .collect();
        assert_eq!(e.alphas, expected);
        let norms = e.normalization_values();
        assert_eq!(norms[0], Q::one());
        assert!(norms[1..].iter().all(Q::is_exact_zero));
        assert_eq!(e.max_eigen_equation_residual(&series).unwrap(), 0.0);
    }

    #[test]
    fn sqrt_family() {
        let series = MatrixSeries::new(vec![
            Matrix::<Q>::from_ints(&[&[0, 1], &[0, 0]]).unwrap(),
            Matrix::from_ints(&[&[0, 0], &[1, 0]]).unwrap(),
            Matrix::zeros(2, 2),
        ])
        .unwrap();
        let opts = ExpandOptions {
            tol: tol(),
            ..Default::default()
        };
        let e = expand(&series, &Q::zero(), 4, 0, &opts).unwrap().expansion;
        assert_eq!(e.alphas, vec![Q::one(), Q::zero(), Q::zero(), Q::zero()]);
        assert_eq!(e.betas[0], qv(&[(1, 1), (0, 1)]));
        assert_eq!(e.betas[1], qv(&[(0, 1), (1, 1)]));
        assert!(e.betas[2..].iter().all(|b| b.iter().all(Q::is_exact_zero)));
        let minus = expand(&series, &Q::zero(), 1, 1, &opts).unwrap().expansion;
        assert_eq!(minus.alphas, vec![-Q::one()]);
    }

    #[test]
    fn rejections() {
        let degenerate = MatrixSeries::new(vec![
            Matrix::<Q>::from_ints(&[&[0, 1], &[0, 0]]).unwrap(),
            Matrix::zeros(2, 2),
            Matrix::from_ints(&[&[0, 0], &[1, 0]]).unwrap(),
        ])
        .unwrap();
        let opts = ExpandOptions {
            tol: tol(),
            ..Default::default()
        };
        assert!(matches!(
            expand(&degenerate, &Q::zero(), 2, 0, &opts),
            Err(ExpansionError::GenericConditionFails { .. })
        ));
        let derogatory = MatrixSeries::new(vec![
            Matrix::<Q>::zeros(2, 2),
            Matrix::from_ints(&[&[1, 2], &[3, 4]]).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            expand(&derogatory, &Q::zero(), 1, 0, &opts).unwrap_err(),
            ExpansionError::NotSingleBlock { geometric: 2 }
        );
        assert_eq!(
            expand(&demo_series(0), &Q::zero(), 0, 0, &opts).unwrap_err(),
            ExpansionError::ZeroOrder
        );
    }

    #[test]
    fn closed_form_matches_known_values() {
        let series = demo_series(0);
        let (partials, frame, _) = prepare(&series, &Q::zero(), &demo_options()).unwrap();
        let c = second_order_closed_form(
            &frame,
            &series.coefficients()[1],
            None,
            &partials,
            0,
            &tol(),
        )
        .unwrap();
        assert_eq!(c.alpha2, Q::from_ratio(1, 2));
        assert_eq!(c.alpha2_charpoly, Q::from_ratio(1, 2));
        assert_eq!(c.beta2, qv(&[(1, 2), (1, 2), (1, 2)]));
    }

    #[test]
    fn branch_evaluation() {
        let series = demo_series(0);
        let e = expand(&series, &Q::zero(), 2, 0, &demo_options())
            .unwrap()
            .expansion;
        let eps = Q::from_ratio(1, 100);
        let (lam, x) = e.evaluate_branch(0, &eps, 0, &tol()).unwrap();
        assert_eq!(lam, Q::from_ratio(21, 200));
        assert_eq!(e.frame.pair(1, &x), Q::one());
        let (lam1, _) = e.evaluate_branch(1, &eps, 0, &tol()).unwrap();
        let (lam1b, _) = e.evaluate_branch(0, &eps, 1, &tol()).unwrap();
        assert_eq!(lam1, lam1b);
        assert_eq!(lam1, Q::from_ratio(-19, 200));
        let (l0, x0) = e.evaluate_branch(1, &Q::zero(), 0, &tol()).unwrap();
        assert_eq!((l0, x0), (Q::zero(), e.betas[0].clone()));
        let (lf, _) = e.evaluate_branch_c64(0, Complex64::new(0.01, 0.0), 0);
        assert!((lf - Complex64::new(0.105, 0.0)).norm() < 1e-15);
        assert!(matches!(
            e.evaluate_branch(0, &Q::from_ratio(1, 2), 0, &tol()),
            Err(ExpansionError::ExactEvaluationUnavailable { m: 2 })
        ));
        assert_eq!(
            e.branch_terms(1),
            vec![(1, Q::one()), (0, Q::from_ratio(1, 2))]
        );
    }

    #[test]
    fn float_demo_expansion() {
        let series = demo_series(2).to_c64();
        let opts = ExpandOptions {
            pinned_m: None,
            pinned_frame: None,
            tol: tol(),
        };
        let e = expand(&series, &Complex64::new(0.0, 0.0), 5, 0, &opts)
            .unwrap()
            .expansion;
        let expected = [1.0, 0.5, 0.125, 0.0, -1.0 / 128.0];
        for (a, b) in e.alphas.iter().zip(expected) {
            assert!((a - Complex64::new(b, 0.0)).norm() < 1e-9, "{a} vs {b}");
        }
        assert!(e.max_eigen_equation_residual(&series).unwrap() < 1e-8);
    }
}
