use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use survopt::repro::{self, Status};
use survopt::validate::{self, Suite};
use survopt::Convention;

mod scenario;
mod table;

/// Sampling-estimator tables, validation suites and inventory solvers.
#[derive(Debug, Parser)]
#[command(name = "survopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reproduce a bundled table and write computed, reference and diff CSVs.
    Repro {
        /// Table id, or `all`.
        table: String,
        #[arg(long, default_value = "repro-out")]
        out: PathBuf,
        #[command(flatten)]
        conv: ConvFlags,
    },
    /// Run a property and oracle suite and emit a JSON verdict.
    Validate {
        #[arg(value_parser = Suite::NAMES)]
        suite: String,
        #[arg(long, env = "SURVOPT_SEED", default_value_t = 42)]
        seed: u64,
        /// Verdict JSON path; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a scenario file and print its solution table.
    Solve {
        scenario: PathBuf,
        /// Variant within the scenario kind (see README).
        #[arg(long)]
        model: Option<String>,
        /// Use the genetic search for horizon scenarios.
        #[arg(long)]
        ga: bool,
        #[arg(long, env = "SURVOPT_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        conv: ConvFlags,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ConvFlags {
    #[arg(long, conflicts_with = "sign_consistent")]
    strict_print: bool,
    #[arg(long)]
    sign_consistent: bool,
}

impl ConvFlags {
    fn get(&self) -> Option<Convention> {
        match (self.strict_print, self.sign_consistent) {
            (true, _) => Some(Convention::StrictPrint),
            (_, true) => Some(Convention::SignConsistent),
            _ => None,
        }
    }
}

/// Failure classes with stable exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Compute(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<survopt::Error> for Failure {
    fn from(e: survopt::Error) -> Self {
        match e {
            survopt::Error::InvalidInput(_) | survopt::Error::Config(_) | survopt::Error::TwoPhaseRequired => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Compute(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Compute(format!("{}: {e}", path.display()))
}

fn cmd_repro(table: &str, out: &Path, conv: Option<Convention>) -> Result<(), Failure> {
    let ids: Vec<&str> = if table == "all" {
        repro::TABLE_IDS.to_vec()
    } else if repro::is_known(table) {
        vec![table]
    } else {
        return Err(Failure::Usage(format!(
            "unknown table id '{table}'; expected one of {} or all",
            repro::TABLE_IDS.join(", ")
        )));
    };
    for id in ids {
        let r = repro::run(id, conv).map_err(|e| Failure::Compute(format!("{id}: {e}")))?;
        r.write(out).map_err(|e| io_failure(out, e))?;
        println!("{}", r.summary());
        for c in r.cells.iter().filter(|c| c.status == Status::Doc) {
            println!("  DOC {}/{}: reference {} computed {:.6} ({})", c.row, c.column, c.reference, c.computed, c.note);
        }
    }
    Ok(())
}

fn cmd_validate(suite: &str, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let suite: Suite = suite.parse().map_err(|e: survopt::Error| Failure::Usage(e.to_string()))?;
    let v = validate::run(suite, seed);
    for c in &v.checks {
        eprintln!("{} {} (value {:.3e}, threshold {:.3e})", if c.passed { "ok  " } else { "FAIL" }, c.name, c.value, c.threshold);
    }
    let json = v.to_json() + "\n";
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
            }
            std::fs::write(path, json).map_err(|e| io_failure(path, e))?;
        }
        None => print!("{json}"),
    }
    if v.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Failure::Compute(format!("failed checks: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Repro { table, out, conv } => cmd_repro(table, out, conv.get()),
        Command::Validate { suite, seed, out } => cmd_validate(suite, *seed, out.as_deref()),
        Command::Solve { scenario, model, ga, seed, conv, out } => {
            let opts = scenario::Options { model: model.as_deref(), ga: *ga, seed: *seed, conv: conv.get() };
            scenario::solve(scenario, &opts, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Compute(m) => eprintln!("computation failed: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
