use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qcarnot_cli::{identity_lines, load_spec, simulate, sweep, verify_identity, CliError};

#[derive(Parser)]
#[command(name = "qcarnot", version, about = "Particle-in-a-box quantum Carnot engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one cycle and write samples.csv and report.csv
    Simulate {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify the sudden-expansion energy identity by direct summation
    VerifyIdentity {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = qcarnot_cli::commands::DEFAULT_MAX_TERMS)]
        max_terms: u64,
    },
    /// Evaluate the cycle over a range of L3 values and write a CSV table
    Sweep {
        spec: PathBuf,
        #[arg(long)]
        l3_from: f64,
        #[arg(long)]
        l3_to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { spec, out } => {
            let spec = load_spec(&spec)?;
            let result = simulate(&spec, &out)?;
            print!("{}", result.report_csv);
            if let Some(identity) = result.identity {
                print!("{}", identity_lines(&identity));
            }
        }
        Command::VerifyIdentity { n, alpha, tol, max_terms } => match verify_identity(n, alpha, tol, max_terms) {
            Ok(report) => print!("{}", identity_lines(&report)),
            Err(CliError::Verification(msg)) => {
                println!("{msg}");
                return Err(CliError::Verification("energy identity not certified".into()));
            }
            Err(e) => return Err(e),
        },
        Command::Sweep { spec, l3_from, l3_to, steps, out } => {
            let spec = load_spec(&spec)?;
            let rows = sweep(&spec, l3_from, l3_to, steps, &out)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
