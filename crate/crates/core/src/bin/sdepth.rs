use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(sdepth_core::cli::run(std::env::args_os()))
}
