use std::process::ExitCode;

fn main() -> ExitCode {
    let report = exmaj_cli::run_args(std::env::args_os());
    if report.to_stderr {
        eprint!("{}", report.text);
    } else {
        print!("{}", report.text);
    }
    ExitCode::from(report.code as u8)
}
