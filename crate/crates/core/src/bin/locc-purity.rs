use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(locc_purity::cli::run(std::env::args_os()))
}
