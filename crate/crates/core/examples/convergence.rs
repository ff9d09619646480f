//! Float-mode expansion checked against directly computed eigenvalues on a
//! grid of eps values; the error should fall like eps^((N+1)/m).

use puiseux::expansion::{expand, ExpandOptions};
use puiseux::linalg::Matrix;
use puiseux::scalar::Complex64;
use puiseux::series::MatrixSeries;
use puiseux::validation::{convergence_check, default_grid, ConvergenceReport};

pub fn run_example() -> Result<Vec<ConvergenceReport>, Box<dyn std::error::Error>> {
    let a0 = Matrix::from_ratios(&[
        &[(-1, 2), (1, 1), (1, 2)],
        &[(1, 2), (0, 1), (-1, 2)],
        &[(-1, 1), (1, 1), (1, 1)],
    ])?;
    let a1 = Matrix::from_ints(&[&[2, 0, -1], &[2, 0, -1], &[1, 0, 0]])?;
    let series = MatrixSeries::<Complex64>::new(vec![a0, a1, Matrix::zeros(3, 3)])?;
    let zero = Complex64::new(0.0, 0.0);
    let mut reports = Vec::new();
    for order in 1..=3 {
        let e = expand(&series, &zero, order, 0, &ExpandOptions::default())?.expansion;
        reports.push(convergence_check(&e, &series, &default_grid())?);
    }
    Ok(reports)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (k, r) in run_example()?.iter().enumerate() {
        let slopes: Vec<String> = r
            .branches
            .iter()
            .map(|b| b.slope.map_or("-".into(), |s| format!("{s:.3}")))
            .collect();
        println!(
            "N = {}: expected {:.2}, fitted [{}], passed {}",
            k + 1,
            r.expected_slope,
            slopes.join(", "),
            r.passed
        );
    }
    Ok(())
}
