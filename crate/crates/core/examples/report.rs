//! Running a JSON problem description through the same pipeline as the
//! `perturb expand` command.

use puiseux::cli::{run_str, Report, RunOptions};

pub fn run_example() -> Result<Report, Box<dyn std::error::Error>> {
    let text = include_str!("data/double_eigenvalue.json");
    let options = RunOptions {
        order: Some(5),
        verbose_frame: true,
        ..Default::default()
    };
    Ok(run_str(text, &options)?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = run_example()?;
    println!("{}", report.to_json_pretty());
    std::process::exit(report.exit_code());
}
