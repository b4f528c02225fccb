use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qfs_cli::run(std::env::args_os()))
}
