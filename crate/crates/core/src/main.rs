use std::process::ExitCode;

fn main() -> ExitCode {
    curvop::cli::main_with_args(std::env::args_os())
}
