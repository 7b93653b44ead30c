use std::process::ExitCode;

fn main() -> ExitCode {
    pocketsim::cli::run(std::env::args_os())
}
