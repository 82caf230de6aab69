use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nlab::experiment::{preset, run, ExperimentConfig};
use nlab::oracle::lattice_counts;
use nlab::rearrange::SpectralConstants;
use nlab::Error;

#[derive(Parser)]
#[command(name = "nlab", version, about = "Laplacian eigenpairs, nodal domains and spectral inequality checks on grid domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a JSON config or a built-in preset.
    Run {
        #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the spectral constants for dimension N as JSON.
    Constants {
        #[arg(long)]
        dim: u32,
    },
    /// Exact closed-form oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Lattice counts of the square [0, pi]^2 up to lambda.
    Lattice {
        #[arg(long)]
        lambda_max: f64,
    },
}

fn load(config: Option<PathBuf>, preset_name: Option<String>) -> Result<ExperimentConfig, Error> {
    match (config, preset_name) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)
        }
        (None, Some(name)) => preset(&name),
        (None, None) => Err(Error::Config("need --config or --preset".into())),
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> ExitCode {
    match serde_json::to_string_pretty(v) {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Constants { dim } => match SpectralConstants::new(dim) {
            Ok(c) => print_json(&c),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Oracle {
            which: OracleCommand::Lattice { lambda_max },
        } => {
            if !(lambda_max >= 0.0) {
                eprintln!("error: --lambda-max must be nonnegative");
                return ExitCode::from(2);
            }
            print_json(&lattice_counts(lambda_max))
        }
        Command::Run {
            config,
            preset,
            out,
            seed,
            threads,
        } => {
            let mut cfg = match load(config, preset) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: config: {e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("error: thread pool: {e}");
                    return ExitCode::from(2);
                }
            }
            match run(&cfg, out.as_deref()) {
                Ok(outcome) => {
                    let r = &outcome.report;
                    for v in &r.checks {
                        eprintln!("{:<28} {}  margin {:+.4e}", v.label(), if v.passed { "pass" } else { "FAIL" }, v.margin);
                    }
                    eprintln!("wrote {} files to {}", outcome.written.len(), outcome.out_dir.display());
                    if r.passed {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("failing checks: {}", r.failing.join(", "));
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
