use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use unitary_birkhoff::cli::{self, GroupChoice, StrategyChoice};

/// Birkhoff decompositions of unit-line-sum unitary matrices.
#[derive(Parser)]
#[command(name = "xu-birkhoff", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a Haar-random XU(n) matrix.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decompose a matrix file and audit the result.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "auto")]
        group: GroupChoice,
        #[arg(long, default_value = "auto")]
        strategy: StrategyChoice,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Re-check a decomposition against its source matrix.
    Verify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        decomposition: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the number of Birkhoff terms for n = 1..=max-n.
    Counts {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn run(command: Command) -> unitary_birkhoff::Result<bool> {
    match command {
        Command::Gen { n, seed, out } => {
            cli::cmd_gen(n, seed, &out)?;
            println!("wrote XU({n}) matrix (seed {seed}) to {}", out.display());
            Ok(true)
        }
        Command::Decompose {
            input,
            group,
            strategy,
            out,
            tol,
            allow_large,
        } => {
            let outcome = cli::cmd_decompose(&input, group, strategy, &out, tol, allow_large)?;
            let f = &outcome.file;
            let group = unitary_birkhoff::GroupKind::try_from(&f.group)?;
            println!(
                "group {group}, {}, N = {}, T = {}",
                f.strategy, f.order, f.t_choice
            );
            println!("{}", outcome.report);
            Ok(outcome.report.passed())
        }
        Command::Verify {
            matrix,
            decomposition,
            tol,
        } => {
            let report = cli::cmd_verify(&matrix, &decomposition, tol)?;
            println!("{report}");
            Ok(report.passed())
        }
        Command::Counts { max_n, csv } => {
            print!("{}", cli::cmd_counts(max_n, csv.as_deref())?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("audit failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
