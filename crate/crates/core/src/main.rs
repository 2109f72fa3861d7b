use std::process::ExitCode;

fn main() -> ExitCode {
    match congest_lb::cli::run(std::env::args_os()) {
        Ok(code) => ExitCode::from(code.clamp(0, 255) as u8),
        Err(err) => match err.downcast::<clap::Error>() {
            Ok(parse_err) => {
                let _ = parse_err.print();
                ExitCode::from(if parse_err.use_stderr() { 2 } else { 0 })
            }
            Err(other) => {
                eprintln!("error: {other:#}");
                ExitCode::from(2)
            }
        },
    }
}
