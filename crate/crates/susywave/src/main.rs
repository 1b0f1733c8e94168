use std::process::ExitCode;

fn main() -> ExitCode {
    susywave::cli::run()
}
