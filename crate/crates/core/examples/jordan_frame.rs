//! Building a Jordan frame around a defective eigenvalue and checking the
//! identities that the partial inverse Lambda satisfies.

use puiseux::frame::JordanFrame;
use puiseux::linalg::Matrix;
use puiseux::scalar::{Complex64, GaussianRational as Q, Scalar};

pub struct Summary {
    pub exact_violations: Vec<String>,
    pub float_violations: Vec<String>,
    pub w0: Matrix<Q>,
    pub lambda: Matrix<Q>,
}

pub fn run_example() -> Result<Summary, Box<dyn std::error::Error>> {
    let tol = Default::default();
    // P diag(J_2(3), 5) P^-1 with a unimodular P
    let p = Matrix::<Q>::from_ints(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]])?;
    let d = Matrix::block_diag(&[
        &Matrix::jordan_block(2, &Q::from_i64(3)),
        &Matrix::from_ints(&[&[5]])?,
    ]);
    let a0 = p.matmul(&d)?.matmul(&p.inverse(&tol)?)?;
    let frame = JordanFrame::build(&a0, &Q::from_i64(3), 2, &tol)?;
    let a0f: Matrix<Complex64> = a0.to_c64();
    let frame_f = JordanFrame::build(&a0f, &Complex64::new(3.0, 0.0), 2, &tol)?;
    Ok(Summary {
        exact_violations: frame.invariant_violations(&a0),
        float_violations: frame_f.invariant_violations(&a0f),
        w0: frame.w0().clone(),
        lambda: frame.lambda_matrix().clone(),
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = run_example()?;
    println!("W0 = {:?}", s.w0);
    println!("Lambda = {:?}", s.lambda);
    println!("exact violations: {:?}", s.exact_violations);
    println!("float violations: {:?}", s.float_violations);
    Ok(())
}
