use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mems_sim::analysis::{beam_analyze, dmtl_phase, dmtl_sparams, dmtl_synth, power_sweep};
use mems_sim::design::{load_design, DesignFile};
use mems_sim::{Error, Result};
use serde::Serialize;

/// RF-MEMS varactor and DMTL phase shifter analysis.
#[derive(Debug, Parser)]
#[command(name = "mems-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cantilever electromechanics.
    #[command(subcommand)]
    Beam(BeamCommand),
    /// Distributed MEMS transmission line.
    #[command(subcommand)]
    Dmtl(DmtlCommand),
}

#[derive(Debug, Subcommand)]
enum BeamCommand {
    /// Pull-in, release, power limits and capacitances as JSON.
    Analyze { file: PathBuf },
    /// Release voltage against RF power as CSV.
    SweepPower {
        file: PathBuf,
        /// Lowest RF power, W.
        #[arg(long)]
        pmin: f64,
        /// Highest RF power, W.
        #[arg(long)]
        pmax: f64,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Debug, Subcommand)]
enum DmtlCommand {
    /// Per-cell phase and loaded impedances at one frequency as JSON.
    Phase {
        file: PathBuf,
        /// Frequency, Hz.
        #[arg(long)]
        freq: f64,
    },
    /// Two-port S-parameters of the whole line as Touchstone.
    Sparams(SparamsArgs),
    /// Bit plan for a set of phase targets as JSON.
    Synth {
        file: PathBuf,
        /// Frequency, Hz.
        #[arg(long)]
        freq: f64,
        /// Phase targets in degrees, comma separated and ascending.
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<f64>,
    },
}

#[derive(Debug, Args)]
struct SparamsArgs {
    file: PathBuf,
    #[arg(long)]
    fmin: f64,
    #[arg(long)]
    fmax: f64,
    #[arg(long)]
    points: usize,
    /// One `u` or `d` per cell, input port first.
    #[arg(long)]
    pattern: String,
    /// Write the Touchstone file here and print a JSON summary instead.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct SparamsSummary<'a> {
    output: &'a Path,
    pattern: &'a str,
    points: usize,
    f_bragg: f64,
    within_half_bragg: bool,
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("MEMS_SIM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::Invalid {
            path: "MEMS_SIM_THREADS".into(),
            message: format!("expected a positive integer, got `{raw}`"),
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Domain(e.to_string()))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn load(file: &Path) -> Result<DesignFile> {
    load_design(file).map_err(|e| match e {
        Error::Io(io) => Error::Invalid {
            path: file.display().to_string(),
            message: io.to_string(),
        },
        other => other,
    })
}

/// Runs the command and returns everything destined for stdout.
fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Beam(BeamCommand::Analyze { file }) => Ok(json(&beam_analyze(&load(&file)?)?)),
        Command::Beam(BeamCommand::SweepPower {
            file,
            pmin,
            pmax,
            steps,
        }) => Ok(power_sweep(&load(&file)?, pmin, pmax, steps)?.to_csv()),
        Command::Dmtl(DmtlCommand::Phase { file, freq }) => Ok(json(&dmtl_phase(&load(&file)?, freq)?)),
        Command::Dmtl(DmtlCommand::Synth { file, freq, targets }) => {
            Ok(json(&dmtl_synth(&load(&file)?, freq, &targets)?))
        }
        Command::Dmtl(DmtlCommand::Sparams(args)) => {
            let sweep = dmtl_sparams(&load(&args.file)?, args.fmin, args.fmax, args.points, &args.pattern)?;
            let touchstone = format!(
                "! pattern {}\n! f_bragg {:e} Hz\n! within_half_bragg {}\n{}",
                sweep.pattern,
                sweep.f_bragg,
                sweep.within_half_bragg,
                sweep.to_touchstone()?
            );
            if !sweep.within_half_bragg {
                eprintln!(
                    "warning: grid reaches {:e} Hz, past half the Bragg frequency {:e} Hz",
                    args.fmax.max(args.fmin),
                    sweep.f_bragg
                );
            }
            match &args.output {
                None => Ok(touchstone),
                Some(path) => {
                    std::fs::write(path, touchstone)?;
                    Ok(json(&SparamsSummary {
                        output: path,
                        pattern: &sweep.pattern,
                        points: sweep.points.len(),
                        f_bragg: sweep.f_bragg,
                        within_half_bragg: sweep.within_half_bragg,
                    }))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
