use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(switchrad::cli::run(std::env::args()) as u8)
}
