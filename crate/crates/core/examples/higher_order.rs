//! Fifth-order expansion of the 3x3 example and evaluation of both
//! branches at a small eps, next to the closed-form eigenvalues.

use puiseux::expansion::{expand, ExpandOptions};
use puiseux::linalg::Matrix;
use puiseux::scalar::{Complex64, GaussianRational as Q, Scalar};
use puiseux::series::MatrixSeries;

pub struct Summary {
    pub alphas: Vec<Q>,
    /// (branch value, closed form) at eps = 1e-3 for h = 0, 1.
    pub branches: Vec<(f64, f64)>,
}

pub fn run_example() -> Result<Summary, Box<dyn std::error::Error>> {
    let a0 = Matrix::from_ratios(&[
        &[(-1, 2), (1, 1), (1, 2)],
        &[(1, 2), (0, 1), (-1, 2)],
        &[(-1, 1), (1, 1), (1, 1)],
    ])?;
    let a1 = Matrix::from_ints(&[&[2, 0, -1], &[2, 0, -1], &[1, 0, 0]])?;
    // the family is affine in eps; A_2 and A_3 are zero and must be written out
    let series = MatrixSeries::new(vec![a0, a1, Matrix::zeros(3, 3), Matrix::zeros(3, 3)])?;
    let e = expand(&series, &Q::zero(), 5, 0, &ExpandOptions::default())?.expansion;
    let eps = 1e-3;
    let branches = (0..2)
        .map(|h| {
            let (lam, _) = e.evaluate_branch_c64(h, Complex64::new(eps, 0.0), 0);
            let sign = if h == 0 { 1.0 } else { -1.0 };
            let closed = 0.5 * eps + sign * 0.5 * eps.sqrt() * (eps + 4.0).sqrt();
            (lam.re, closed)
        })
        .collect();
    Ok(Summary {
        alphas: e.alphas,
        branches,
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = run_example()?;
    println!("alphas = {:?}", s.alphas);
    for (h, (series, closed)) in s.branches.iter().enumerate() {
        println!(
            "h = {h}: series {series:.15}, closed form {closed:.15}, diff {:.2e}",
            series - closed
        );
    }
    Ok(())
}
