use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use ross_robin::cli::{execute, Cli, Command, Diagnostic};

fn fail(d: &Diagnostic) -> ExitCode {
    eprintln!("{}", d.to_line());
    ExitCode::from(d.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return fail(&Diagnostic::usage(first));
        }
    };
    let out = match &cli.command {
        Command::Eig(a) => a.output.out.clone(),
        Command::Steklov(a) => a.output.out.clone(),
        Command::Check(a) => a.output.out.clone(),
        Command::Verify(a) => a.output.out.clone(),
        Command::Sweep(a) => a.output.out.clone(),
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(d) => return fail(&d),
    };
    let written = match &out {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    };
    if let Err(msg) = written {
        return fail(&Diagnostic::io(msg));
    }
    match &outcome.violation {
        Some(d) => fail(d),
        None => ExitCode::SUCCESS,
    }
}
