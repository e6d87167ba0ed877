//! `qea`: run, validate and sweep configuration files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use qea_core::config::{resolve, Diagnostic, Resolved, RunConfig};
use qea_core::presets::{load_presets, Catalog};
use qea_core::report::{self, FailureKind, RunError};

const DEFAULT_OUT_DIR: &str = "qea-output";

#[derive(Parser)]
#[command(name = "qea", version, about = "Forecast the year of quantum economic advantage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a configuration and write the summary, curves and any sweep.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output.path` in the config.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a configuration without solving it.
    Validate { config: PathBuf },
    /// List the available problem, hardware and roadmap presets.
    Presets,
    /// Run only the sensitivity sweep of a configuration.
    Sweep {
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Failure with the exit code it maps to.
enum Failure {
    Config(Vec<Diagnostic>),
    Solver(anyhow::Error),
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Io(_) => 4,
        }
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match (e.kind(), e) {
            (_, RunError::Config(d)) => Failure::Config(d),
            (FailureKind::Config, e) => Failure::Config(vec![Diagnostic::new("parameters", e.to_string())]),
            (FailureKind::Solver, e) => Failure::Solver(e.into()),
        }
    }
}

fn catalog() -> Result<Catalog<f64>, Failure> {
    load_presets().map_err(|e| Failure::Io(anyhow!(e).context("loading presets")))
}

fn load(path: &Path, catalog: &Catalog<f64>) -> Result<Resolved, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Io)?;
    let config = RunConfig::from_toml(&text).map_err(Failure::Config)?;
    resolve(&config, catalog).map_err(Failure::Config)
}

fn out_dir(flag: Option<PathBuf>, resolved: &Resolved) -> PathBuf {
    flag.or_else(|| resolved.output.path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(Failure::Io)?;
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Io)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn describe(label: &str, status: Option<qea_core::solver::Status>, year: Option<f64>) -> Option<String> {
    use qea_core::solver::Status;
    Some(match (status?, year) {
        (Status::AlreadyAchieved, Some(y)) => format!("{label}: already achieved at {y}"),
        (Status::AdvantageAt, Some(y)) => format!("{label}: advantage in {y}"),
        _ => format!("{label}: no advantage by {}", qea_core::solver::HORIZON_YEAR),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { config, out } => {
            let resolved = load(&config, &catalog()?)?;
            let output = report::evaluate(&resolved)?;
            let s = &output.summary;
            for line in [
                describe("speed", s.status, s.t_star),
                describe("cost", s.cost_status, s.t_c_star),
            ]
            .into_iter()
            .flatten()
            {
                println!("{line}");
            }
            let files = report::render(&output, resolved.output.format);
            write_files(&out_dir(out, &resolved), &files)
        }
        Command::Sweep { config, out } => {
            let resolved = load(&config, &catalog()?)?;
            let sweep = report::sweep(&resolved)?.ok_or_else(|| {
                Failure::Config(vec![Diagnostic::new("sweep", "the configuration has no [sweep] section")])
            })?;
            let file = report::render_sweep(&sweep, resolved.output.format);
            write_files(&out_dir(out, &resolved), &[file])
        }
        Command::Validate { config } => {
            load(&config, &catalog()?)?;
            println!("{}: valid", config.display());
            Ok(())
        }
        Command::Presets => {
            let c = catalog()?;
            println!("problems:");
            for p in &c.problems {
                let tag = if p.illustrative { " (illustrative)" } else { "" };
                println!("  {}{tag}: {}", p.name, p.description);
                println!("    classical: {}", p.classical_runtime);
                println!("    quantum:   {}", p.quantum_runtime);
            }
            println!("hardware:");
            for h in &c.hardware {
                println!(
                    "  {}: hws {}, plqr {}, penalty {}, roadmap {}",
                    h.name, h.hws, h.plqr, h.connectivity_penalty, h.roadmap
                );
            }
            println!("roadmaps:");
            for r in &c.roadmaps {
                let span = match (r.points.first(), r.points.last()) {
                    (Some(a), Some(b)) => format!("{} ({}) to {} ({})", a.year, a.qubits, b.year, b.qubits),
                    _ => String::new(),
                };
                println!("  {}: {span}", r.label);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(diags) => {
                    for d in diags {
                        eprintln!("error: {d}");
                    }
                }
                Failure::Solver(e) | Failure::Io(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
