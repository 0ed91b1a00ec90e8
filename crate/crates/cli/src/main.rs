use std::process;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;

use esdlab_cli::args::{Cli, Command};
use esdlab_cli::commands::{cmd_esd, cmd_evolve, cmd_sweep, write_output, Output};
use esdlab_cli::verify::{self, VerifyOptions};
use esdlab_cli::{ExitCode, Failure};

fn print_meta() {
    let unix_time = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "tool": "esdlab",
        "version": env!("CARGO_PKG_VERSION"),
        "args": std::env::args().collect::<Vec<_>>(),
        "unix_time": unix_time,
    });
    eprintln!("{meta}");
}

fn emit(out: Output, path: Option<&std::path::Path>, meta: bool) -> Result<ExitCode, Failure> {
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    if meta {
        print_meta();
    }
    write_output(path, &out.body)?;
    Ok(ExitCode::Success)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Evolve(a) => emit(cmd_evolve(&a)?, a.output.out.as_deref(), a.output.meta),
        Command::Esd(a) => emit(cmd_esd(&a)?, a.out.as_deref(), a.meta),
        Command::Sweep(a) => emit(cmd_sweep(&a)?, a.output.out.as_deref(), a.output.meta),
        Command::Verify(a) => {
            if a.dmax < 2 {
                return Err(Failure::usage(format!(
                    "--dmax must be at least 2, got {}",
                    a.dmax
                )));
            }
            if !(a.tol.is_finite() && a.tol > 0.0) {
                return Err(Failure::usage(format!(
                    "--tol must be positive, got {}",
                    a.tol
                )));
            }
            let results = verify::run(&VerifyOptions {
                dmax: a.dmax,
                tol: a.tol,
                fault: a.inject_fault,
            });
            for r in &results {
                println!("{}", r.line());
            }
            let failed: Vec<_> = results
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.name)
                .collect();
            if failed.is_empty() {
                println!("all {} suites passed", results.len());
                Ok(ExitCode::Success)
            } else {
                Err(Failure::verification(format!(
                    "failed suites: {}",
                    failed.join(", ")
                )))
            }
        }
    }
}

fn main() {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code
        }
    };
    process::exit(code as i32);
}
