//! Random generic instances for self-checks.
//!
//! `A_0 = P blockdiag(J_m(lambda0), W0) P^-1` with `P` a product of unit
//! lower and upper triangular integer matrices, so `P^-1` is integral too.
//! `W0` is upper triangular with diagonal entries different from `lambda0`.
//! The perturbation matrices are random small integers, with `A_1`
//! adjusted until `(v_m, A_1 u_1) != 0` in the frame `P`.

use rand::Rng;

use crate::linalg::Matrix;
use crate::scalar::{GaussianRational as Q, Scalar, ToleranceConfig};
use crate::series::MatrixSeries;

#[derive(Debug, Clone)]
pub struct GenericInstance {
    pub series: MatrixSeries<Q>,
    pub lambda0: Q,
    pub m: usize,
    /// A frame witness: `P^-1 A_0 P = blockdiag(J_m(lambda0), W0)`.
    pub p: Matrix<Q>,
}

fn small<R: Rng>(rng: &mut R, bound: i64) -> Q {
    Q::from_i64(rng.gen_range(-bound..=bound))
}

fn unimodular<R: Rng>(rng: &mut R, n: usize) -> Matrix<Q> {
    let lower = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Q::one(),
        std::cmp::Ordering::Greater => small(rng, 1),
        std::cmp::Ordering::Less => Q::zero(),
    });
    let upper = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Q::one(),
        std::cmp::Ordering::Less => small(rng, 1),
        std::cmp::Ordering::Greater => Q::zero(),
    });
    lower.matmul(&upper).expect("square")
}

/// Random generic `n x n` instance with a single `m x m` block at
/// `lambda0` and `k` perturbation matrices `A_1..A_k`.
///
/// With `alpha1_exact` set, `A_1` is rescaled so that `(v_m, A_1 u_1)` is
/// `+-c^m` for a small positive integer `c`, keeping the principal
/// `alpha_1` a Gaussian rational.
pub fn random_generic_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    k: usize,
    alpha1_exact: bool,
) -> GenericInstance {
    assert!(m >= 1 && m <= n && k >= 1);
    let lambda0 = small(rng, 2);
    let w = n - m;
    let w0 = Matrix::from_fn(w, w, |i, j| {
        if i == j {
            let offset = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
            lambda0.clone() + Q::from_i64(offset)
        } else if i < j {
            small(rng, 2)
        } else {
            Q::zero()
        }
    });
    let d = Matrix::block_diag(&[&Matrix::jordan_block(m, &lambda0), &w0]);
    let p = unimodular(rng, n);
    let p_inv = p.inverse(&ToleranceConfig::default()).expect("unimodular");
    let a0 = p.matmul(&d).and_then(|x| x.matmul(&p_inv)).expect("square");
    let u1 = p.column(0);
    let vm = p_inv.row(m - 1).conj();
    let mut a1 = loop {
        let candidate = Matrix::from_fn(n, n, |_, _| small(rng, 3));
        if !vm.inner(&(&candidate * &u1)).is_exact_zero() {
            break candidate;
        }
    };
    if alpha1_exact {
        let a_m1 = vm.inner(&(&a1 * &u1));
        // negative radicands keep a Gaussian-rational principal root only for m <= 2
        let sign = if m <= 2 && rng.gen_bool(0.5) { -1 } else { 1 };
        let target = Q::from_i64(sign * rng.gen_range(1..=2i64).pow(m as u32));
        a1 = a1.scale(&(target / a_m1));
    }
    let mut coefficients = vec![a0, a1];
    for _ in 2..=k {
        coefficients.push(Matrix::from_fn(n, n, |_, _| small(rng, 3)));
    }
    GenericInstance {
        series: MatrixSeries::new(coefficients).expect("consistent shapes"),
        lambda0,
        m,
        p,
    }
}
