use std::process::ExitCode;

fn main() -> ExitCode {
    bms2d::cli::run()
}
