use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use qslice_cli::commands::{bounds, exit_code, run, Cli, Command};
use qslice_cli::serve::{serve, SessionStore};

fn emit(cli: &Cli, body: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Command::Serve { port, host } = &cli.command {
        let result = bounds(cli.bounds.as_deref()).and_then(|b| {
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(serve(&format!("{host}:{port}"), Arc::new(SessionStore::new(b))))?;
            Ok(())
        });
        return match result {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        };
    }
    let result = run(&cli).and_then(|out| {
        let body = if cli.json {
            let mut s = serde_json::to_string_pretty(&out.json)?;
            s.push('\n');
            s
        } else {
            out.text
        };
        emit(&cli, &body)?;
        Ok(out.refuted)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
