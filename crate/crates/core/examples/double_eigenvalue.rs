//! The 3x3 example with a double eigenvalue at 0: coefficients through
//! second order in exact arithmetic, using a fixed frame.

use puiseux::expansion::{expand, ExpandOptions};
use puiseux::linalg::{Matrix, Vector};
use puiseux::scalar::{GaussianRational as Q, Scalar};
use puiseux::series::MatrixSeries;

pub struct Summary {
    pub alphas: Vec<Q>,
    pub betas: Vec<Vector<Q>>,
    pub lambda: Matrix<Q>,
}

pub fn run_example() -> Result<Summary, Box<dyn std::error::Error>> {
    let a0 = Matrix::from_ratios(&[
        &[(-1, 2), (1, 1), (1, 2)],
        &[(1, 2), (0, 1), (-1, 2)],
        &[(-1, 1), (1, 1), (1, 1)],
    ])?;
    let a1 = Matrix::from_ints(&[&[2, 0, -1], &[2, 0, -1], &[1, 0, 0]])?;
    let series = MatrixSeries::new(vec![a0, a1])?;
    let options = ExpandOptions {
        pinned_m: Some(2),
        pinned_frame: Some(Matrix::from_ints(&[&[1, 1, 1], &[0, 1, 1], &[1, 1, 0]])?),
        tol: Default::default(),
    };
    let out = expand(&series, &Q::zero(), 2, 0, &options)?;
    let e = out.expansion;
    Ok(Summary {
        lambda: e.frame.lambda_matrix().clone(),
        alphas: e.alphas,
        betas: e.betas,
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = run_example()?;
    for (k, a) in s.alphas.iter().enumerate() {
        println!("alpha_{} = {a}", k + 1);
    }
    for (k, b) in s.betas.iter().enumerate() {
        println!("beta_{k} = {b:?}");
    }
    println!("Lambda = {:?}", s.lambda);
    Ok(())
}
