//! `corrlab` command line: run experiment sweeps, validate configs, and emit
//! the closed-form vs quadrature error table.
//!
//! Exit codes: 0 on success, 1 on configuration/validation problems, 2 on
//! numeric failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use corrlab::error::Error;
use corrlab::harness::{
    emit_results, load_config, oracle_gap, oracle_gap_csv, preset, run_experiment, Engine,
    OutputFormat, ScenarioConfig,
};

#[derive(Parser)]
#[command(name = "corrlab", version, about = "Spatial-correlation laboratory for massive MIMO antenna topologies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment plan and write the result table.
    Run {
        /// Path to a config file; mutually exclusive with --preset.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Shipped preset name: fig4, fig5, fig6 or fig7.
        #[arg(long)]
        preset: Option<String>,
        /// Override the master seed of every scenario.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the trial count of every scenario.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the correlation engine of every scenario.
        #[arg(long)]
        engine: Option<Engine>,
        /// Output path.
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
        /// Output format: csv or json.
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
    /// Parse and validate a config file.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Closed-form vs quadrature entrywise error table for the correlated
    /// scenarios of a plan.
    OracleGap {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_plan(config: Option<&PathBuf>, preset_name: Option<&String>) -> Result<Vec<ScenarioConfig>, Error> {
    match (config, preset_name) {
        (Some(path), None) => load_config(path),
        (None, Some(name)) => preset(name),
        (Some(_), Some(_)) => Err(Error::ConfigValidation {
            field: "config".into(),
            msg: "--config and --preset are mutually exclusive".into(),
        }),
        (None, None) => Err(Error::ConfigValidation {
            field: "config".into(),
            msg: "one of --config or --preset is required".into(),
        }),
    }
}

fn exit_for(err: &Error) -> ExitCode {
    match err {
        Error::ConfigParse { .. }
        | Error::ConfigValidation { .. }
        | Error::InvalidParameter { .. }
        | Error::Io { .. } => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { config, preset, seed, trials, engine, out, format } => {
            let mut plan = load_plan(config.as_ref(), preset.as_ref())?;
            for scenario in &mut plan {
                if let Some(s) = seed {
                    scenario.seed = s;
                }
                if let Some(t) = trials {
                    scenario.n_trials = t;
                }
                if let Some(e) = engine {
                    scenario.engine = e;
                }
            }
            let rows = run_experiment(&plan)?;
            emit_results(&rows, format, &out)?;
            eprintln!(
                "wrote {} rows for {} scenario(s) to {}",
                rows.len(),
                plan.len(),
                out.display()
            );
            Ok(())
        }
        Command::Validate { config } => {
            let plan = load_config(&config)?;
            let points: usize = plan.iter().map(|s| s.sweep.len()).sum();
            eprintln!("ok: {} scenario(s), {} sweep point(s)", plan.len(), points);
            Ok(())
        }
        Command::OracleGap { config, preset, out } => {
            let plan = load_plan(config.as_ref(), preset.as_ref())?;
            let mut rows = Vec::new();
            for scenario in &plan {
                rows.extend(oracle_gap(scenario)?);
            }
            if rows.is_empty() {
                return Err(Error::ConfigValidation {
                    field: "plan".into(),
                    msg: "no correlated scenarios to compare".into(),
                });
            }
            let csv = oracle_gap_csv(&rows);
            match out {
                Some(path) => std::fs::write(&path, csv).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => print!("{csv}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}
