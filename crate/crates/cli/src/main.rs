//! Command-line driver: scenario presets, verification suites, and CSV/JSON
//! series for coherence in Grover's search.

mod commands;
mod output;
mod scenario;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::SpectrumArgs;
use output::{Format, OutputDir};
use scenario::ScenarioArgs;
use verify::{Level, Mutation};

/// Bad arguments or configuration; exit code 2.
#[derive(Debug)]
pub struct InvalidInput(pub String);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

#[derive(Debug, Parser)]
#[command(name = "grover-coherence", version, about = "Tsallis relative entropy of coherence in Grover's search")]
struct Cli {
    /// Output directory
    #[arg(long, global = true, env = "GROVER_COHERENCE_OUT", default_value = "out")]
    out: PathBuf,
    /// Format of per-k series files
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coherence of every stage state along the iteration
    Simulate(ScenarioArgs),
    /// Per-operator coherence changes, turning point, and sign classification
    Dynamics(ScenarioArgs),
    /// Run the invariant suites and write a pass/fail report
    Verify(VerifyArgs),
    /// Walsh spectrum of the target set and its spectral constants
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Level::Fast)]
    level: Level,
    /// Inject a known defect; the run is expected to fail
    #[arg(long, value_enum, default_value_t = Mutation::None, hide = true)]
    mutate: Mutation,
}

enum Outcome {
    Done,
    VerificationFailed,
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let mut out = OutputDir::create(&cli.out, cli.format)?;
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a, &mut out)?,
        Command::Dynamics(a) => commands::dynamics(a, &mut out)?,
        Command::Spectrum(a) => commands::spectrum(a, &mut out)?,
        Command::Verify(a) => {
            let report = verify::run_suites(a.level, a.mutate);
            for s in &report.suites {
                let status = match (s.passed, s.fatal) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "WARN",
                };
                println!("{status} {} ({} checks, {} failed, {:.1} s)", s.name, s.checks, s.failure_count, s.seconds);
                for c in &s.counterexamples {
                    println!("    {c}");
                }
                for n in &s.notes {
                    println!("    note: {n}");
                }
            }
            let level = match a.level {
                Level::Fast => "fast",
                Level::Full => "full",
            };
            let path = out.json(&format!("verify_{level}.json"), &report)?;
            println!("report: {}", path.display());
            return Ok(if report.passed { Outcome::Done } else { Outcome::VerificationFailed });
        }
    }
    for p in out.written() {
        println!("{}", p.display());
    }
    Ok(Outcome::Done)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<InvalidInput>().is_some() || cause.downcast_ref::<grover_coherence::Error>().is_some() {
            return 2;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<csv::Error>() {
            if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                return 3;
            }
        }
        if cause.downcast_ref::<serde_json::Error>().is_some_and(|e| e.is_io()) {
            return 3;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
