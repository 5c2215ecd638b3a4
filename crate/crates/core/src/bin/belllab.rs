use std::process::ExitCode;

fn main() -> ExitCode {
    belllab::cli::run(std::env::args_os())
}
