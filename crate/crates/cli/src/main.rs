use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kerr_spin_cli::captions::{CAPTION_A, CAPTION_M};
use kerr_spin_cli::suite::{all_pass, run_suite};
use kerr_spin_cli::{parse_params, run_status, CliError};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "kerrspin", version, about = "Spin precession of Dirac particles on Kerr geodesics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write CSV plus a JSON summary.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate one configuration and write its SVG panels.
    Figures {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the numerical checks and print a JSON report.
    Validate {
        #[arg(long)]
        seed: u64,
        /// Black-hole parameters as M=..,a=..
        #[arg(long)]
        params: Option<String>,
    },
}

#[derive(Serialize)]
struct Report {
    seed: u64,
    mass: f64,
    spin: f64,
    random_params: bool,
    pass: bool,
    checks: Vec<kerr_spin_cli::suite::Check>,
}

// A closed pipe on stdout (`| head`) is not an error of the run.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out } => {
            let run = kerr_spin_cli::simulate(&config, &out)?;
            emit(&serde_json::to_string_pretty(&run.summary).expect("summary serializes"));
            run_status(&run)
        }
        Command::Figures { config, out } => {
            let (run, paths) = kerr_spin_cli::figures(&config, &out)?;
            for p in paths {
                emit(&p.display().to_string());
            }
            run_status(&run)
        }
        Command::Validate { seed, params } => {
            let fixed = params.as_deref().map(parse_params).transpose()?;
            let orbit_params = match fixed {
                Some(p) => p,
                None => kerr_spin::BlackHoleParams::new(CAPTION_M, CAPTION_A).expect("caption parameters"),
            };
            let checks = run_suite(seed, fixed.as_ref(), &orbit_params);
            let report = Report {
                seed,
                mass: orbit_params.mass(),
                spin: orbit_params.spin(),
                random_params: fixed.is_none(),
                pass: all_pass(&checks),
                checks,
            };
            emit(&serde_json::to_string_pretty(&report).expect("report serializes"));
            if report.pass {
                Ok(())
            } else {
                let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass && !c.informational).map(|c| c.name.as_str()).collect();
                Err(CliError::Validation(failed.join("; ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kerrspin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
