use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aoi_cli::config::PolicySelection;
use aoi_cli::figure::DEFAULT_FIGURE_RHO;
use aoi_cli::{emit_figure_data, run_single, run_sweep, CliError, Options, SingleSpec, SweepSpec};

/// Age-of-information laboratory: closed forms, simulation and sweeps for a
/// zero-wait source feeding an edge server with a packet-replacement queue.
#[derive(Debug, Parser)]
#[command(name = "aoi-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep rho for one or both policies and write a CSV row per point.
    Sweep(Options),
    /// Deep report for one point; exits 2 if a relative error exceeds --threshold.
    Single(Options),
    /// Curve data and a gnuplot script comparing replacement with FCFS.
    Figure(Options),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(opts) => {
            let settings = opts.resolve()?;
            let spec = SweepSpec::from_settings(
                &settings,
                "0.1,0.25,0.5,0.75,1,1.5,2,3",
                PolicySelection::Both,
            )?;
            let outcome = run_sweep(&spec)?;
            if spec.output_path.is_none() {
                print!("{}", outcome.csv);
            }
            eprint!("{}", outcome.summary());
            Ok(())
        }
        Command::Single(opts) => {
            let settings = opts.resolve()?;
            let spec = SingleSpec::from_settings(&settings)?;
            let outcome = run_single(&spec)?;
            if spec.report_path.is_none() {
                print!("{}", outcome.text);
            }
            if outcome.passed() {
                Ok(())
            } else {
                Err(CliError::Tolerance(outcome.failures.join("; ")))
            }
        }
        Command::Figure(opts) => {
            let settings = opts.resolve()?;
            let spec =
                SweepSpec::from_settings(&settings, DEFAULT_FIGURE_RHO, PolicySelection::Both)?;
            let path = settings
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("figure.csv"));
            let outcome = emit_figure_data(&spec, &path)?;
            eprintln!(
                "wrote {} and {}",
                outcome.data_path.display(),
                outcome.script_path.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("aoi-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
