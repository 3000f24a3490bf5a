//! `lsiib`: run light-shift blockade scenarios from a TOML config.

mod config;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{Format, RunConfig};
use run::RunError;

#[derive(Parser)]
#[command(name = "lsiib", version, about = "Simulate Raman ladders blocked by light-shift imbalance")]
struct Cli {
    /// Worker threads for sweeps
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Log progress and regime warnings at info level
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured scenario and write its output files
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding output.dir
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format, overriding output.format
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Print the light shifts and Raman frequencies of the configured parameters
    Derive {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn })
        .format_timestamp(None)
        .init();

    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lsiib: {}", e.message().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    if cli.threads == Some(0) {
        return Err(RunError::Config("--threads must be at least 1".into()));
    }
    match cli.command {
        Command::Run { config, out, format } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(dir) = out {
                cfg.out_dir = dir;
            }
            if let Some(f) = format {
                cfg.format = match f {
                    FormatArg::Csv => Format::Csv,
                    FormatArg::Json => Format::Json,
                };
            }
            let artifacts = run::execute(&cfg, cli.threads)?;
            output::write_all(&cfg.out_dir, &artifacts)
                .map_err(|e| RunError::Other(format!("cannot write outputs to {}: {e}", cfg.out_dir.display())))?;
            log::info!("wrote {} files to {}", artifacts.len(), cfg.out_dir.display());
            Ok(())
        }
        Command::Derive { config } => {
            let cfg = RunConfig::load(&config)?;
            println!("{}", run::derive(&cfg)?);
            Ok(())
        }
    }
}
