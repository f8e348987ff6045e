use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let e = qframe_cli::execute(std::env::args_os());
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(e.stdout.as_bytes());
    let _ = std::io::stderr().write_all(e.stderr.as_bytes());
    ExitCode::from(e.exit_code)
}
