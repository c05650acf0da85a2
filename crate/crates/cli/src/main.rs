use std::io::Write;
use std::process::ExitCode;

use bredon_cli::{execute, Cli, CliError, ErrorKind};
use bredon_core::OutputFormat;
use clap::Parser;

fn wants_machine(args: &[String]) -> bool {
    args.windows(2)
        .any(|w| w[0] == "--format" && w[1] == "machine")
        || args.iter().any(|a| a == "--format=machine")
}

fn fail(err: &CliError, machine: bool) -> ExitCode {
    if machine {
        eprintln!("{}", err.to_json());
    } else {
        eprintln!("error: {err}");
    }
    ExitCode::from(err.exit_code as u8)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let machine = wants_machine(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let text = text.trim_end();
            let err = CliError::new(
                ErrorKind::Usage,
                text.strip_prefix("error: ").unwrap_or(text),
            );
            return fail(&err, machine);
        }
    };
    let (output, format) = match execute(&cli) {
        Ok(x) => x,
        Err(e) => return fail(&e, machine),
    };
    let text = output.render(format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| {
            CliError::new(
                ErrorKind::Usage,
                format!("cannot write {}: {e}", path.display()),
            )
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new(ErrorKind::Usage, e.to_string())),
    };
    if let Err(e) = written {
        return fail(&e, format == OutputFormat::Machine);
    }
    match output.failure() {
        Some(e) => fail(&e, format == OutputFormat::Machine),
        None => ExitCode::SUCCESS,
    }
}
