use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use empirical_io::{estimate_params, load_log, EmpiricalError};
use sweep_cli::{load_config, run_sweep, ConfigFailure, SweepError, ENV_OUTPUT_DIR};

/// Like `say!`, but survives stdout closing early (`sweep run ... | head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "sweep",
    version,
    about = "Parameter sweeps over the correlated-prediction pricing game",
    after_help = format!(
        "Exit codes: 0 success, 1 validation error, 2 numerical failure.\n\
         {ENV_OUTPUT_DIR} overrides the directory part of the output stem."
    )
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a config and write <output>.csv, .schema.txt, .manifest.json
    Run { config: PathBuf },
    /// Check a config, reporting every problem at once
    Validate { config: PathBuf },
    /// Print parameter estimates for a prediction log (empirical shortcut)
    Estimate { log: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems are validation errors; --help and --version
            // are successes.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Validate { config } => cmd_validate(&config),
        Command::Estimate { log } => cmd_estimate(&log),
    }
}

fn report_config_failure(failure: &ConfigFailure) {
    match failure {
        ConfigFailure::Invalid(errors) => {
            for e in errors {
                eprintln!("error: {e}");
            }
            let n = errors.len();
            eprintln!("{n} validation error{}", if n == 1 { "" } else { "s" });
        }
        other => eprintln!("error: {other}"),
    }
}

fn cmd_run(config: &PathBuf) -> ExitCode {
    let cfg = match load_config(config) {
        Ok(cfg) => cfg,
        Err(failure) => {
            report_config_failure(&failure);
            return ExitCode::from(1);
        }
    };
    match run_sweep(&cfg) {
        Ok(summary) => {
            say!(
                "wrote {} rows to {} in {} ms",
                summary.rows,
                summary.paths.csv.display(),
                summary.wall_ms
            );
            say!("schema:   {}", summary.paths.schema.display());
            say!("manifest: {}", summary.paths.manifest.display());
            ExitCode::SUCCESS
        }
        Err(SweepError::Config(failure)) => {
            report_config_failure(&failure);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_validate(config: &PathBuf) -> ExitCode {
    match load_config(config) {
        Ok(cfg) => {
            say!(
                "ok: {} sweep, {} grid point{}, writes {}.csv",
                cfg.mode,
                cfg.grid_len(),
                if cfg.grid_len() == 1 { "" } else { "s" },
                cfg.output
            );
            ExitCode::SUCCESS
        }
        Err(failure) => {
            report_config_failure(&failure);
            ExitCode::from(1)
        }
    }
}

fn cmd_estimate(log_path: &PathBuf) -> ExitCode {
    let log = match load_log(log_path) {
        Ok(log) => log,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let est = match estimate_params(&log) {
        Ok(est) => est,
        Err(e) => {
            eprintln!("error: {e}");
            // A log that parses but cannot identify the parameters is a
            // numerical failure, not a malformed input.
            let code = if matches!(e, EmpiricalError::Degenerate(_)) {
                2
            } else {
                1
            };
            return ExitCode::from(code);
        }
    };
    say!("rows       {}", log.len());
    say!("theta_hat  {:.6}  (se {:.2e})", est.theta_hat, est.theta_se);
    say!("a1_hat     {:.6}  (se {:.2e})", est.a1_hat, est.a1_se);
    say!("a2_hat     {:.6}  (se {:.2e})", est.a2_hat, est.a2_se);
    say!("rho_hat    {:.6}  (se {:.2e})", est.rho_hat, est.rho_se);
    if est.projection_flagged() {
        say!(
            "note: raw correlation {:.6} was projected onto [0, 1] by more than one standard error",
            est.rho_raw
        );
    }
    for (i, rates) in est.rates.iter().enumerate() {
        say!(
            "firm {}     tpr {:.6}  tnr {:.6}",
            i + 1,
            rates.tpr,
            rates.tnr
        );
    }
    ExitCode::SUCCESS
}
