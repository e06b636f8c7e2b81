use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use vkwave_cli::{emit_report, run_scenario, Format, Scenario};

#[derive(Parser)]
#[command(name = "vkwave", version, about = "Checks exact plate wave solutions against conservation laws and jump conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file and write a report.
    Check {
        /// Scenario file (TOML, or JSON with a `.json` extension).
        #[arg(long)]
        scenario: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Override the scenario's seed for sampled points.
        #[arg(long)]
        seed: Option<u64>,
        /// Include the wall-clock duration in the report.
        #[arg(long)]
        timing: bool,
    },
}

fn main() -> ExitCode {
    let Command::Check {
        scenario,
        out,
        format,
        seed,
        timing,
    } = Cli::parse().command;

    let mut s = match Scenario::from_path(&scenario) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    if let Some(seed) = seed {
        s.seed = seed;
    }
    let start = Instant::now();
    let mut report = match run_scenario(&s) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if timing {
        report.duration_seconds = Some(start.elapsed().as_secs_f64());
    }
    let bytes = emit_report(&report, format);
    let written = match &out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        return fail(e);
    }
    ExitCode::from(report.exit_code() as u8)
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("vkwave: {e}");
    ExitCode::from(2)
}
