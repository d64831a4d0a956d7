use std::process::ExitCode;

use clap::Parser;
use gwa_cli::{parse_request, render, run, Cli, CliError, OutputMode};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let config = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(s) => Some(s),
            Err(e) => {
                return fail(
                    CliError::Usage(format!("cannot read {}: {e}", path.display())),
                    json,
                )
            }
        },
        None => None,
    };
    let req = match parse_request(cli, config.as_deref()) {
        Ok(r) => r,
        Err(e) => return fail(e, json),
    };
    match run(&req) {
        Ok(resp) => {
            print!("{}", render(&resp, req.mode));
            ExitCode::SUCCESS
        }
        Err(e) => fail(e, req.mode == OutputMode::Json),
    }
}

fn fail(e: CliError, json: bool) -> ExitCode {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&e.to_json()).expect("serializable")
        );
    }
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}
