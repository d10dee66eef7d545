use std::process::ExitCode;

fn main() -> ExitCode {
    qwalk_cli::run(std::env::args_os())
}
