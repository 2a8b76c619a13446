mod args;
mod commands;
mod report;
mod scenario;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (cli, format, output) = match &cli.command {
        Command::Scenario(s) => {
            let inv = scenario::load(&s.file)?;
            let inner = Cli::try_parse_from(&inv.args).map_err(|e| Failure::Input(e.to_string()))?;
            let format = inv.format.unwrap_or(cli.format);
            let output = inv.output.or(cli.output.clone());
            (inner, format, output)
        }
        _ => {
            let (f, o) = (cli.format, cli.output.clone());
            (cli, f, o)
        }
    };
    let text = commands::execute(&cli.command)?.render(format);
    write(&text, output)
}

fn write(text: &str, output: Option<PathBuf>) -> Result<(), Failure> {
    let result = match &output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|e| match output {
        Some(p) => Failure::Input(format!("cannot write {}: {e}", p.display())),
        None => Failure::Input(format!("cannot write output: {e}")),
    })
}
