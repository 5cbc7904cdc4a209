use clap::{Parser, Subcommand};
use spinmeter::config::Scenario;
use spinmeter::{execute, load_config, Failure};
use std::path::PathBuf;
use std::process::ExitCode;

/// Spin-orbit coupling as a spin meter: scenario runner.
#[derive(Parser)]
#[command(name = "spinmeter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run {
        config: PathBuf,
        /// Write outputs here instead of the config's output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the available scenarios.
    ListScenarios,
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::ListScenarios => {
            for s in Scenario::ALL {
                println!("{:<14} {}", s.name(), s.description());
            }
        }
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            println!("{}", serde_json::to_string_pretty(&spinmeter::config_json(&cfg)).unwrap());
        }
        Command::Run { config, out } => {
            let mut cfg = load_config(&config)?;
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            let report = execute(&cfg)?;
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            for w in &report.outcome.warnings {
                eprintln!("warning: {w}");
            }
            let failed: Vec<_> = report.outcome.checks.iter().filter(|c| !c.passed).collect();
            if !failed.is_empty() {
                let list: Vec<String> = failed
                    .iter()
                    .map(|c| format!("{}: {:.3e} > {:.3e}", c.name, c.value, c.limit))
                    .collect();
                return Err(Failure::Accuracy(format!("accuracy checks failed: {}", list.join("; "))));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
