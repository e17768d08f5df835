use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use starkindex::record::{run_verify, VerifyOptions};

/// Exact-arithmetic verification of Stark-unit index formulae.
#[derive(Parser)]
#[command(name = "starkindex", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify extension record files against the index formulae:
    /// constructs the candidate unit, checks (P1) and (P2), the product
    /// formula, the |L'|-value identities, the abelian condition and the
    /// squareness criterion.
    Verify {
        /// JSON record files (see docs/schema.md).
        files: Vec<PathBuf>,
        /// Check (P2) at all primes p ≤ p-max with p ∤ |G|.
        #[arg(long = "p-max", default_value_t = 50)]
        p_max: u64,
        /// Emit one JSON report per record instead of text.
        #[arg(long)]
        json: bool,
        /// Comparison tolerance for float checks.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Treat INCONCLUSIVE verdicts as failures.
        #[arg(long)]
        strict: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            files,
            p_max,
            json,
            tolerance,
            strict,
        } => {
            let opts = VerifyOptions {
                p_max,
                tolerance,
                strict,
            };
            let (reports, code) = run_verify(&files, &opts);
            for report in &reports {
                if json {
                    match serde_json::to_string(report) {
                        Ok(line) => println!("{line}"),
                        Err(e) => eprintln!("cannot serialize report for {}: {e}", report.path),
                    }
                } else {
                    print!("{}", report.render_text());
                }
                for diag in &report.diagnostics {
                    eprintln!("{}: {diag}", report.path);
                }
            }
            ExitCode::from(code as u8)
        }
    }
}
