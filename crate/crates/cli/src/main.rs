//! `qbench`: generate, simulate, transpile, ingest and report on benchmark circuits.
//!
//! Exit codes: 0 when every verdict is correct, 1 on verdict or verification
//! failures, 2 on input or schema errors.

mod cases;
mod ingest;
mod report;
mod run;
mod store;
mod transpile;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "qbench", version, about = "Benchmark suites for small gate-based quantum processors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate and execute a suite, persisting counts and verdicts.
    Run(run::RunArgs),
    /// Judge an external counts table against a case or oracle.
    Ingest(ingest::IngestArgs),
    /// Rewrite a QASM circuit onto a device's coupling map.
    Transpile(transpile::TranspileArgs),
    /// Summarise stored runs, optionally checking stationarity.
    Report(report::ReportArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => run::cmd_run(a),
        Command::Ingest(a) => ingest::cmd_ingest(a),
        Command::Transpile(a) => transpile::cmd_transpile(a),
        Command::Report(a) => report::cmd_report(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": format!("{e:#}") }));
            ExitCode::from(2)
        }
    }
}
