use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use floq_otoc::validate::{run_validation, ValidateLevel};
use floq_otoc_cli::commands::{
    cmd_analyze, cmd_run, cmd_sweep, render_report, RunOptions, SweepAxis, SweepOptions,
};
use floq_otoc_cli::{exit_code, UsageError};

/// Exact OTOC simulation for periodically kicked transverse-field Ising
/// chains: runs, parameter sweeps, region analysis, and self-validation.
#[derive(Parser)]
#[command(name = "floq-otoc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one correlator series and write series.csv + manifest.json.
    Run {
        /// Key-value config file, or a manifest.json for an exact re-run.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's out_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Evaluate every k-th kick.
        #[arg(long)]
        stride: Option<usize>,
        /// Wall-clock budget in seconds; exceeding it truncates the series.
        #[arg(long)]
        budget_secs: Option<f64>,
        /// Override a config key, e.g. --set tau=6eps/2 (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run one series per sweep value and summarize them in profile.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Which quantity the values vary.
        #[arg(long)]
        axis: SweepAxisArg,
        /// Comma-separated list of sweep values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
        /// Concurrent series computations.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long)]
        budget_secs: Option<f64>,
        /// Departure threshold used for the profile columns.
        #[arg(long, default_value_t = floq_otoc::analysis::DEPARTURE_THRESHOLD)]
        threshold: f64,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Region report for an existing run directory (series.csv + manifest).
    Analyze {
        /// Directory holding series.csv and manifest.json.
        #[arg(long)]
        run: PathBuf,
        /// Departure threshold on C.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Cross-validate the independent computation routes.
    Validate {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Directory for the machine-readable report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepAxisArg {
    Tau,
    #[value(name = "delta-l")]
    DeltaL,
    N,
}

impl From<SweepAxisArg> for SweepAxis {
    fn from(value: SweepAxisArg) -> Self {
        match value {
            SweepAxisArg::Tau => SweepAxis::Tau,
            SweepAxisArg::DeltaL => SweepAxis::DeltaL,
            SweepAxisArg::N => SweepAxis::Sites,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn parse_set(set: &[String]) -> Result<Vec<(String, String)>, UsageError> {
    set.iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| UsageError(format!("--set needs KEY=VALUE, got {kv:?}")))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code::USAGE
        }
    };
    ExitCode::from(code as u8)
}

fn run(cli: Cli) -> Result<i32, UsageError> {
    match cli.command {
        Command::Run {
            config,
            out,
            stride,
            budget_secs,
            set,
        } => {
            let opts = RunOptions {
                out,
                stride,
                budget_secs,
                set: parse_set(&set)?,
            };
            let outcome = cmd_run(&config, &opts)?;
            println!("wrote {}", outcome.out_dir.display());
            if outcome.truncated {
                eprintln!("warning: series truncated by budget");
                Ok(exit_code::TRUNCATED)
            } else {
                Ok(exit_code::SUCCESS)
            }
        }
        Command::Sweep {
            config,
            axis,
            values,
            out,
            jobs,
            stride,
            budget_secs,
            threshold,
            set,
        } => {
            let opts = SweepOptions {
                out: out.clone(),
                jobs,
                stride,
                budget_secs,
                threshold,
                set: parse_set(&set)?,
            };
            cmd_sweep(&config, axis.into(), &values, &opts)?;
            println!("wrote {}", out.display());
            Ok(exit_code::SUCCESS)
        }
        Command::Analyze { run, threshold } => {
            let report = cmd_analyze(&run, threshold)?;
            print!("{}", render_report(&report));
            Ok(exit_code::SUCCESS)
        }
        Command::Validate { level, out } => {
            let level = match level {
                LevelArg::Quick => ValidateLevel::Quick,
                LevelArg::Full => ValidateLevel::Full,
            };
            let report = run_validation(level).map_err(|e| UsageError(e.to_string()))?;
            print!("{}", report.render_text());
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)
                    .map_err(|e| UsageError(format!("cannot create {}: {e}", dir.display())))?;
                let json = serde_json::to_string_pretty(&report)
                    .map_err(|e| UsageError(format!("cannot encode report: {e}")))?;
                std::fs::write(dir.join("validate_report.json"), json + "\n")
                    .map_err(|e| UsageError(format!("cannot write report: {e}")))?;
            }
            if report.passed() {
                Ok(exit_code::SUCCESS)
            } else {
                Ok(exit_code::CHECK_FAILURE)
            }
        }
    }
}
