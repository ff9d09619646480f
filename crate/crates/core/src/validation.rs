//! Numerical cross-check of a truncated expansion against eigenvalues of
//! `A(eps)` computed directly on a grid of `eps` values.
//!
//! The oracle builds the characteristic polynomial by the trace recursion and
//! finds all of its roots with Aberth's simultaneous iteration; no dense
//! eigensolver is involved.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charpoly::faddeev_leverrier;
use crate::expansion::PuiseuxExpansion;
use crate::linalg::{LinalgError, Matrix};
use crate::scalar::{Complex64, Scalar};
use crate::series::MatrixSeries;

/// Errors below this are treated as saturated and left out of slope fits.
pub const NOISE_FLOOR: f64 = 1e-13;
/// Allowed shortfall of a fitted slope below its expected value.
pub const SLOPE_TOLERANCE: f64 = 0.25;

const ROOT_BACKWARD_ERROR: f64 = 1e-12;
const MAX_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error(
        "root finder stagnated after {iterations} iterations (backward error {backward_error:e})"
    )]
    RootFinderStagnation {
        iterations: usize,
        backward_error: f64,
    },
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let n = coeffs.len() - 1;
    let mut p = coeffs[n];
    let mut dp = Complex64::new(0.0, 0.0);
    let mut scale = coeffs[n].norm();
    // residual measured against the coefficient size on the unit disk and beyond
    let az = z.norm().max(1.0);
    for c in coeffs[..n].iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        scale = scale * az + c.norm();
    }
    (p, dp, scale)
}

fn backward_error(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (p, _, scale) = horner(coeffs, z);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All roots of `sum c_k z^k` (`c_n != 0`).
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, ValidationError> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = (0..n)
        .map(|k| monic[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut iterations = 0;
    loop {
        let mut converged = true;
        for i in 0..n {
            let (p, dp, _) = horner(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = if dp.norm() == 0.0 {
                Complex64::new(radius * 1e-3, radius * 1e-3)
            } else {
                let ratio = p / dp;
                ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion)
            };
            if w.is_finite() {
                z[i] -= w;
            }
            if w.norm() > 1e-15 * (1.0 + z[i].norm()) {
                converged = false;
            }
        }
        iterations += 1;
        if converged || iterations >= MAX_ITERATIONS {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _) = horner(&monic, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let candidate = *zi - p / dp;
            if backward_error(&monic, candidate) < backward_error(&monic, *zi) {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    let worst = z
        .iter()
        .map(|&zi| backward_error(&monic, zi))
        .fold(0.0, f64::max);
    if worst > ROOT_BACKWARD_ERROR || z.iter().any(|zi| !zi.is_finite()) {
        return Err(ValidationError::RootFinderStagnation {
            iterations,
            backward_error: worst,
        });
    }
    Ok(z)
}

/// All `n` eigenvalues of `m`, unordered.
///
/// The roots of the trace-recursion polynomial are refined by a few Aberth
/// sweeps in which `p'/p` is replaced by `tr((z I - m)^-1)`, evaluated through
/// an LU factorization of the matrix itself. This removes the error that
/// rounding the polynomial coefficients puts on simple eigenvalues.
pub fn eigen_oracle(m: &Matrix<Complex64>) -> Result<Vec<Complex64>, ValidationError> {
    let mut z = polynomial_roots(&faddeev_leverrier(m))?;
    let scale = 1.0 + m.norm();
    for _ in 0..POLISH_SWEEPS {
        for i in 0..z.len() {
            let Some(log_derivative) = resolvent_trace(m, z[i]) else {
                continue;
            };
            let repulsion: Complex64 = (0..z.len())
                .filter(|&j| j != i && z[j] != z[i])
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = (log_derivative - repulsion).inv();
            // only small corrections; large ones mean a cluster the sweep cannot resolve
            if step.is_finite() && step.norm() <= 1e-6 * scale {
                z[i] -= step;
            }
        }
    }
    Ok(z)
}

const POLISH_SWEEPS: usize = 3;

/// `tr((z I - m)^-1)` by LU with partial pivoting; `None` at an exact pole.
fn resolvent_trace(m: &Matrix<Complex64>, z: Complex64) -> Option<Complex64> {
    let n = m.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { z - m[(i, j)] } else { -m[(i, j)] })
                .collect()
        })
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let pivot = (k..n).max_by(|&x, &y| a[x][k].norm().total_cmp(&a[y][k].norm()))?;
        if a[pivot][k].norm() == 0.0 {
            return None;
        }
        a.swap(k, pivot);
        perm.swap(k, pivot);
        for r in k + 1..n {
            let f = a[r][k] / a[k][k];
            a[r][k] = f;
            for c in k + 1..n {
                let t = a[k][c];
                a[r][c] -= f * t;
            }
        }
    }
    let mut trace = Complex64::new(0.0, 0.0);
    for col in 0..n {
        // solve (P^T L U) x = e_col and keep x[col]
        let mut y: Vec<Complex64> = perm
            .iter()
            .map(|&p| Complex64::new(if p == col { 1.0 } else { 0.0 }, 0.0))
            .collect();
        for r in 0..n {
            for c in 0..r {
                let t = a[r][c] * y[c];
                y[r] -= t;
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                let t = a[r][c] * y[c];
                y[r] -= t;
            }
            y[r] /= a[r][r];
        }
        trace += y[col];
    }
    trace.is_finite().then_some(trace)
}

/// For each predicted value, the index of its matched oracle value and the
/// distance between them. The assignment is injective.
pub fn branch_match(predicted: &[Complex64], oracle: &[Complex64]) -> Vec<(usize, f64)> {
    assert!(
        predicted.len() <= oracle.len(),
        "more predictions than eigenvalues"
    );
    let cost: Vec<Vec<f64>> = predicted
        .iter()
        .map(|p| oracle.iter().map(|o| (p - o).norm()).collect())
        .collect();
    let assignment = if predicted.len() <= 8 {
        greedy_assignment(&cost)
    } else {
        hungarian(&cost)
    };
    assignment
        .into_iter()
        .enumerate()
        .map(|(i, j)| (j, cost[i][j]))
        .collect()
}

fn greedy_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let mut pairs: Vec<(f64, usize, usize)> = cost
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &c)| (c, i, j)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut row_done = vec![None; cost.len()];
    let mut col_used = vec![false; cost.first().map_or(0, Vec::len)];
    for (_, i, j) in pairs {
        if row_done[i].is_none() && !col_used[j] {
            row_done[i] = Some(j);
            col_used[j] = true;
        }
    }
    row_done
        .into_iter()
        .map(|j| j.expect("rows <= cols"))
        .collect()
}

/// Minimum-cost assignment of rows to distinct columns (`rows <= cols`),
/// by the shortest augmenting path form of the Hungarian method.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let rows = cost.len();
    let cols = cost[0].len();
    let mut u = vec![0.0; rows + 1];
    let mut v = vec![0.0; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for i in 1..=rows {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=cols {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut result = vec![0; rows];
    for j in 1..=cols {
        if owner[j] != 0 {
            result[owner[j] - 1] = j - 1;
        }
    }
    result
}

/// `10^-2, 10^-2.5, ..., 10^-6`.
pub fn default_grid() -> Vec<f64> {
    (0..9).map(|k| 10f64.powf(-2.0 - 0.5 * k as f64)).collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchConvergence {
    pub h: usize,
    /// `|lambda_h(eps) - matched eigenvalue|` per grid point.
    pub errors: Vec<f64>,
    /// `|(A(eps) - lambda_h I) x_h| / |x_h|` per grid point.
    pub residuals: Vec<f64>,
    /// `None` when fewer than three errors lie above the noise floor.
    pub slope: Option<f64>,
    pub residual_slope: Option<f64>,
    pub residuals_monotone: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub eps_grid: Vec<f64>,
    /// `(N + 1) / m`
    pub expected_slope: f64,
    /// `(N + 2 - m) / m`; the residual slope is checked only when positive.
    pub expected_residual_slope: f64,
    pub branches: Vec<BranchConvergence>,
    pub passed: bool,
}

fn check_grid(grid: &[f64]) -> Result<(), ValidationError> {
    if grid.len() < 4 {
        return Err(ValidationError::GridTooSmall(format!(
            "{} points, at least 4 needed",
            grid.len()
        )));
    }
    if grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(ValidationError::GridTooSmall(
            "eps values must be positive".into(),
        ));
    }
    let max = grid.iter().copied().fold(f64::MIN, f64::max);
    let min = grid.iter().copied().fold(f64::MAX, f64::min);
    if max / min < 100.0 {
        return Err(ValidationError::GridTooSmall(format!(
            "grid spans {:.2} decades, at least 2 needed",
            (max / min).log10()
        )));
    }
    Ok(())
}

fn fit_above_floor(grid: &[f64], values: &[f64]) -> Option<f64> {
    let points: Vec<(f64, f64)> = grid
        .iter()
        .zip(values)
        .filter(|(_, &v)| v > NOISE_FLOOR)
        .map(|(&e, &v)| (e, v))
        .collect();
    if points.len() < 3 {
        None
    } else {
        loglog_slope(&points)
    }
}

/// Residuals must not grow as `eps` shrinks over the smaller half of the
/// grid; values at the noise floor count as decreasing.
fn monotone_tail(grid: &[f64], residuals: &[f64]) -> bool {
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[b].total_cmp(&grid[a]));
    let tail = &order[order.len() / 2..];
    tail.windows(2).all(|w| {
        let (prev, next) = (residuals[w[0]], residuals[w[1]]);
        next <= NOISE_FLOOR || next <= prev * (1.0 + 1e-9)
    })
}

/// Compares every branch of `exp` with the oracle eigenvalues of
/// `A(eps)` for each `eps` in `grid`.
pub fn convergence_check<S: Scalar>(
    exp: &PuiseuxExpansion<S>,
    series: &MatrixSeries<S>,
    grid: &[f64],
) -> Result<ConvergenceReport, ValidationError> {
    check_grid(grid)?;
    let m = exp.m;
    let order = exp.order();
    let series_c = series.to_c64();
    let lambda0 = exp.lambda0.to_c64();
    let per_point: Vec<Vec<(f64, f64)>> = grid
        .par_iter()
        .map(|&eps| -> Result<Vec<(f64, f64)>, ValidationError> {
            let e = Complex64::new(eps, 0.0);
            let a = series_c.eval(&e)?;
            // shifting by lambda0 keeps the cluster near the origin
            let eigen: Vec<Complex64> = eigen_oracle(&a.shifted(&lambda0)?)?
                .into_iter()
                .map(|z| z + lambda0)
                .collect();
            let branches: Vec<_> = (0..m).map(|h| exp.evaluate_branch_c64(h, e, 0)).collect();
            let predicted: Vec<Complex64> = branches.iter().map(|b| b.0).collect();
            let matched = branch_match(&predicted, &eigen);
            branches
                .iter()
                .zip(matched)
                .map(|((lam, x), (_, err))| {
                    let r = (a.shifted(lam)?.mul_vec(x)?).norm() / x.norm();
                    Ok((err, r))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let expected_slope = (order + 1) as f64 / m as f64;
    let expected_residual_slope = (order as f64 + 2.0 - m as f64) / m as f64;
    let branches: Vec<BranchConvergence> = (0..m)
        .map(|h| {
            let errors: Vec<f64> = per_point.iter().map(|p| p[h].0).collect();
            let residuals: Vec<f64> = per_point.iter().map(|p| p[h].1).collect();
            let slope = fit_above_floor(grid, &errors);
            let residual_slope = fit_above_floor(grid, &residuals);
            let residuals_monotone = monotone_tail(grid, &residuals);
            let slope_ok = slope.is_none_or(|s| s >= expected_slope - SLOPE_TOLERANCE);
            let residual_ok = expected_residual_slope <= 0.0
                || residual_slope.is_none_or(|s| s >= expected_residual_slope - SLOPE_TOLERANCE);
            BranchConvergence {
                h,
                passed: slope_ok && residual_ok && residuals_monotone,
                errors,
                residuals,
                slope,
                residual_slope,
                residuals_monotone,
            }
        })
        .collect();
    Ok(ConvergenceReport {
        eps_grid: grid.to_vec(),
        expected_slope,
        expected_residual_slope,
        passed: branches.iter().all(|b| b.passed),
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ToleranceConfig;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn small_oracle_cases() {
        let swap = Matrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        let ev = sorted(eigen_oracle(&swap).unwrap());
        assert!((ev[0] - c(-1.0, 0.0)).norm() < 1e-12 && (ev[1] - c(1.0, 0.0)).norm() < 1e-12);
        let j3 = Matrix::jordan_block(3, &c(0.0, 0.0));
        assert!(eigen_oracle(&j3).unwrap().iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn demo_matrix_at_one_hundredth() {
        let a = Matrix::<Complex64>::from_ratios(&[
            &[(-1, 2), (1, 1), (1, 2)],
            &[(1, 2), (0, 1), (-1, 2)],
            &[(-1, 1), (1, 1), (1, 1)],
        ])
        .unwrap()
        .add(
            &Matrix::from_ints(&[&[2, 0, -1], &[2, 0, -1], &[1, 0, 0]])
                .unwrap()
                .scale(&c(0.01, 0.0)),
        )
        .unwrap();
        let ev = eigen_oracle(&a).unwrap();
        let root = (0.01f64 * 4.01).sqrt() / 2.0;
        for target in [0.005 + root, 0.005 - root] {
            assert!(
                ev.iter().any(|z| (z - c(target, 0.0)).norm() < 1e-12),
                "{target}"
            );
        }
        let matched = branch_match(&[c(0.105, 0.0)], &ev);
        assert!((matched[0].1 - (0.005 + root - 0.105)).abs() < 1e-12);
    }

    #[test]
    fn matching() {
        let oracle = [c(0.1, 0.0), c(-0.1, 0.0), c(0.5, 0.0)];
        let m = branch_match(&[c(-0.1, 0.0), c(0.1, 0.0)], &oracle);
        assert_eq!(m, vec![(1, 0.0), (0, 0.0)]);
        let many: Vec<Complex64> = (0..12).map(|k| c(k as f64, 0.0)).collect();
        let pred: Vec<Complex64> = (0..10).rev().map(|k| c(k as f64 + 0.1, 0.0)).collect();
        let m = branch_match(&pred, &many);
        for (i, (j, err)) in m.into_iter().enumerate() {
            assert_eq!(j, 9 - i);
            assert!((err - 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn hungarian_beats_greedy() {
        let cost = vec![vec![1.0, 2.0], vec![1.1, 10.0]];
        assert_eq!(greedy_assignment(&cost), vec![0, 1]);
        assert_eq!(hungarian(&cost), vec![1, 0]);
    }

    #[test]
    fn grid_requirements() {
        assert!(matches!(
            check_grid(&[1e-2, 1e-3, 1e-4]),
            Err(ValidationError::GridTooSmall(_))
        ));
        assert!(matches!(
            check_grid(&[1e-2, 8e-3, 6e-3, 4e-3]),
            Err(ValidationError::GridTooSmall(_))
        ));
        assert!(check_grid(&default_grid()).is_ok());
        assert_eq!(
            loglog_slope(&[(1.0, 1.0), (10.0, 100.0), (100.0, 1e4)]).map(|s| (s * 1e9).round()),
            Some(2e9)
        );
    }

    #[test]
    fn exact_branch_sits_at_noise_floor() {
        use crate::expansion::{expand, ExpandOptions};
        let series = MatrixSeries::new(vec![
            Matrix::<Complex64>::from_ints(&[&[0, 1], &[0, 0]]).unwrap(),
            Matrix::from_ints(&[&[0, 0], &[1, 0]]).unwrap(),
        ])
        .unwrap();
        let opts = ExpandOptions {
            tol: ToleranceConfig::default(),
            ..Default::default()
        };
        let e = expand(&series, &c(0.0, 0.0), 1, 0, &opts)
            .unwrap()
            .expansion;
        let report = convergence_check(&e, &series, &default_grid()).unwrap();
        assert!(report.passed);
        assert!(report.branches.iter().all(|b| b.slope.is_none()));
    }

    proptest! {
        #[test]
        fn companion_matrices(roots in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..=8)) {
            let roots: Vec<Complex64> = roots.into_iter().map(|(a, b)| c(a, b)).collect();
            let n = roots.len();
            // well-separated roots; clusters are conditioned like (eps)^(1/k)
            for i in 0..n {
                for j in 0..i {
                    prop_assume!((roots[i] - roots[j]).norm() > 0.05);
                }
            }
            let mut coeffs = vec![c(1.0, 0.0)];
            for r in &roots {
                let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
                for (k, a) in coeffs.iter().enumerate() {
                    next[k + 1] += a;
                    next[k] -= a * r;
                }
                coeffs = next;
            }
            let companion = Matrix::from_fn(n, n, |i, j| {
                if j == n - 1 {
                    -coeffs[i]
                } else if i == j + 1 {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            });
            let found = eigen_oracle(&companion).unwrap();
            let matched = branch_match(&roots, &found);
            for (r, (j, err)) in roots.iter().zip(matched) {
                prop_assert!(err < 1e-10, "{r} vs {}", found[j]);
            }
        }
    }
}
