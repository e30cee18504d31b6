use std::path::PathBuf;
use std::process::ExitCode;

use bdris::{run, Error, Experiment, RunOptions};
use clap::Parser;

/// Run a BD-RIS beamforming experiment and write its tables to a directory.
#[derive(Debug, Parser)]
#[command(name = "bdris", version)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: Experiment,
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for Monte-Carlo trials (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Suppress the summary on stdout.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            return fail(&Error::config("threads", "must be at least 1"));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            return fail(&Error::config("threads", e.to_string()));
        }
    }
    let opts = RunOptions {
        experiment: cli.experiment,
        config_path: cli.config,
        out: cli.out,
        seed: cli.seed,
    };
    match run(&opts) {
        Ok(report) => {
            if !cli.quiet {
                for line in &report.summary {
                    println!("{line}");
                }
                println!(
                    "wrote {} artifacts to {}",
                    report.manifest.artifacts.len(),
                    opts.out.display()
                );
            }
            match report.gate_error() {
                Some(e) => fail(&e),
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("{}", e.machine_line());
    ExitCode::from(e.exit_code() as u8)
}
