//! Both forms of the generic condition: the eps-derivative of the
//! characteristic polynomial, and the entry (v_m, A_1 u_1) in a Jordan frame.

use puiseux::charpoly::{bivariate_charpoly_truncated, charpoly_partials};
use puiseux::expansion::{prepare, ExpandOptions};
use puiseux::linalg::Matrix;
use puiseux::scalar::{GaussianRational as Q, Scalar};
use puiseux::series::MatrixSeries;

pub struct Summary {
    pub m: usize,
    pub charpoly_value: Q,
    pub a_m1_value: Q,
    pub holds: bool,
    /// Rows of a_ij for i <= 2, j <= 3.
    pub table: Vec<Vec<Q>>,
}

fn family(a1: Matrix<Q>) -> MatrixSeries<Q> {
    MatrixSeries::new(vec![
        Matrix::from_ints(&[&[0, 1], &[0, 0]]).unwrap(),
        Matrix::zeros(2, 2),
        a1,
    ])
    .unwrap()
}

pub fn run_example() -> Result<Vec<Summary>, Box<dyn std::error::Error>> {
    let tol = Default::default();
    // [[0, 1], [eps, 0]] has eigenvalues +-sqrt(eps); [[0, 1], [eps^2, 0]] has +-eps
    let cases = [
        MatrixSeries::new(vec![
            Matrix::from_ints(&[&[0, 1], &[0, 0]])?,
            Matrix::from_ints(&[&[0, 0], &[1, 0]])?,
        ])?,
        family(Matrix::from_ints(&[&[0, 0], &[1, 0]])?),
    ];
    let mut out = Vec::new();
    for series in &cases {
        let table = bivariate_charpoly_truncated(series, &Q::zero(), series.order().min(2), 3)?;
        let (_, partials) = charpoly_partials(series, &Q::zero(), None, &tol)?;
        let (_, _, routes) = prepare(series, &Q::zero(), &ExpandOptions::default())?;
        out.push(Summary {
            m: partials.m,
            charpoly_value: routes.charpoly_value.clone(),
            a_m1_value: routes.a_m1_value.clone(),
            holds: routes.holds(),
            table: table.rows().to_vec(),
        });
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for s in run_example()? {
        println!(
            "m = {}, charpoly route {}, frame route {}, generic: {}",
            s.m, s.charpoly_value, s.a_m1_value, s.holds
        );
        for (i, row) in s.table.iter().enumerate() {
            println!("  eps^{i}: {row:?}");
        }
    }
    Ok(())
}
