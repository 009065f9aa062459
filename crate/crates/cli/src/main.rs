use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use densefew_cli::commands::{run, Cli};
use densefew_cli::envelope::{inputs_digest, ReportEnvelope};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if cli.json {
        let envelope = ReportEnvelope {
            command: out.command.to_string(),
            inputs_digest: inputs_digest(out.command, &out.params, &out.files),
            params: out.params.clone(),
            result: out.result.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: out.seed,
        };
        let text = serde_json::to_string_pretty(&envelope).expect("serializable");
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    } else {
        let _ = write!(std::io::stdout().lock(), "{}", out.human);
    }
    match out.failure {
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        None => ExitCode::SUCCESS,
    }
}
