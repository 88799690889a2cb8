use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qepi::runner::{describe_state, run_suite, Format, RunConfig, Suite};

#[derive(Parser)]
#[command(name = "qepi", version, about = "Seeded checks of quantum entropy power inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite and write a report. Exit 0 if every normative check passes, 1 if one
    /// fails, 2 on configuration or runtime errors.
    Run {
        #[arg(long)]
        suite: Option<Suite>,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Print moments, entropy, symplectic spectrum and tail mass of a state such as
    /// `thermal(1)*coherent(0.5,0.2)`.
    Describe {
        spec: String,
        #[arg(long)]
        cutoff: Option<usize>,
    },
}

fn run(command: Command) -> qepi::Result<ExitCode> {
    match command {
        Command::Run {
            suite,
            config,
            seed,
            trials,
            out,
            format,
        } => {
            let mut cfg = RunConfig::parse(&std::fs::read_to_string(&config)?)?;
            cfg.suite = suite.unwrap_or(cfg.suite);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.trials = trials.unwrap_or(cfg.trials);
            cfg.output = out.or(cfg.output);
            cfg.format = format.unwrap_or(cfg.format);
            let (path, summary) = run_suite(&cfg)?;
            eprintln!(
                "{} rows, {} normative failures -> {}",
                summary.rows,
                summary.normative_failures,
                path.display()
            );
            Ok(if summary.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Describe { spec, cutoff } => {
            let summary = describe_state(&spec, cutoff)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
