use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use puiseux::cli::{run_str, Mode, RunOptions};

#[derive(Parser)]
#[command(
    name = "perturb",
    version,
    about = "Puiseux expansions of perturbed eigenvalues"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the eigenvalues near lambda0 and write a JSON report.
    ///
    /// PERTURB_ZERO_THRESHOLD, PERTURB_RANK_REL_THRESHOLD and
    /// PERTURB_ROUTE_REL_THRESHOLD override the spec's tolerances.
    Expand {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include the frame (U, U^-1, chain, Lambda) in the report.
        #[arg(long)]
        verbose_frame: bool,
        /// Run the convergence check (default grid unless the spec gives one).
        #[arg(long)]
        validate: bool,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        branch: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

fn main() -> ExitCode {
    let Command::Expand {
        spec,
        out,
        verbose_frame,
        validate,
        mode,
        order,
        branch,
    } = Args::parse().command;
    let text = match std::fs::read_to_string(&spec) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", spec.display());
            return ExitCode::from(1);
        }
    };
    let options = RunOptions {
        verbose_frame,
        validate,
        mode: mode.map(|m| match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }),
        order,
        branch,
    };
    let report = match run_str(&text, &options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", spec.display());
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    let json = report.to_json_pretty();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, json + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        // a closed pipe (e.g. `| head`) is not an error worth reporting
        None => {
            let _ = writeln!(std::io::stdout(), "{json}");
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
