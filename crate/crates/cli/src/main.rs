use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (status, out, err) = bestchoice_cli::run_args(std::env::args_os());
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    let _ = std::io::stderr().lock().write_all(err.as_bytes());
    ExitCode::from(status)
}
