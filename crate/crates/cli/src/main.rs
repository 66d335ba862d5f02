use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use chebcontour_cli::args::{Cli, Format};
use chebcontour_cli::{output_args, run, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let table = match run(&cli.command) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let out = output_args(&cli.command);
    let text = match out.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    let written = match &out.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::SUCCESS
}
