use std::process::ExitCode;

use snc::harness::{parse_cli, run_sweep, write_results, HarnessError};

fn run() -> Result<(), HarnessError> {
    let cfg = parse_cli(std::env::args_os())?;
    let res = run_sweep(&cfg)?;
    for w in &res.warnings {
        eprintln!("warning: {w}");
    }
    let side = write_results(&res, &cfg.out)?;
    eprintln!("wrote {} and {}", cfg.out.display(), side.display());
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ HarnessError::Cli(_)) => {
            if let HarnessError::Cli(c) = &e {
                let _ = c.print();
            }
            ExitCode::from(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("snc-sim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
