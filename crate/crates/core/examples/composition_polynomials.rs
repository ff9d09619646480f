//! The polynomials p_{j,i} and r_l: recursive tables next to the
//! composition sums that define them.

use puiseux::combinatorics::oracle::{p_bruteforce, r_bruteforce};
use puiseux::combinatorics::{p_table, r_sequence};
use puiseux::scalar::{GaussianRational as Q, Scalar};

pub struct Summary {
    pub p: Vec<Vec<Q>>,
    pub r: Vec<Q>,
    pub mismatches: usize,
}

pub fn run_example() -> Result<Summary, Box<dyn std::error::Error>> {
    let alphas: Vec<Q> = [(1, 1), (1, 2), (1, 8), (0, 1), (-1, 128), (3, 7)]
        .iter()
        .map(|&(p, q)| Q::from_ratio(p, q))
        .collect();
    let m = 2;
    let p = p_table(&alphas, 6, 6)?;
    let r = r_sequence(&alphas, 4, m)?;
    let mut mismatches = 0;
    for (j, row) in p.iter().enumerate() {
        for (i, value) in row.iter().enumerate() {
            mismatches += usize::from(*value != p_bruteforce(&alphas, j, i));
        }
    }
    for (l, value) in r.iter().enumerate() {
        mismatches += usize::from(*value != r_bruteforce(&alphas, l + 1, m));
    }
    Ok(Summary { p, r, mismatches })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = run_example()?;
    for (j, row) in s.p.iter().enumerate() {
        println!("p_{j},* = {row:?}");
    }
    println!("r = {:?}", s.r);
    println!("disagreements with the composition sums: {}", s.mismatches);
    Ok(())
}
