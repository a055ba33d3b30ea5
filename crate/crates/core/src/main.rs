use std::io::Write;
use std::process::ExitCode;

use serre_weights::cli::{main_with, EXIT_INPUT, EXIT_OK};

fn main() -> ExitCode {
    let (outcome, out) = main_with(std::env::args_os(), std::io::stdin().lock());
    let code = match (&out, outcome.code) {
        (Some(path), EXIT_OK | 2) => match std::fs::write(path, &outcome.text) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("error: --out: {e}");
                EXIT_INPUT
            }
        },
        _ => {
            let text = outcome.text.as_bytes();
            let written = if outcome.code == EXIT_INPUT {
                std::io::stderr().write_all(text)
            } else {
                std::io::stdout().write_all(text)
            };
            if written.is_err() {
                EXIT_INPUT
            } else {
                outcome.code
            }
        }
    };
    ExitCode::from(code as u8)
}
