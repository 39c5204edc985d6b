use std::io;
use std::process::ExitCode;

use ssm_pa::experiment::cli::{parse_spec, usage, SpecError};
use ssm_pa::experiment::execute;

fn main() -> ExitCode {
    let spec = match parse_spec(std::env::args_os()) {
        Ok(spec) => spec,
        Err(SpecError::Clap(e)) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
        Err(e @ SpecError::Invalid(_)) => {
            eprintln!("error: {e}\n\n{}", usage());
            return ExitCode::from(2);
        }
    };
    match execute(&spec, &mut io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
