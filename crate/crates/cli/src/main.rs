use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use depthseg_cli::commands;
use depthseg_cli::error::{CliError, EXIT_NO_DRIVER};
use depthseg_cli::report::DriverStatus;
use depthseg_cli::ConfigArgs;

/// Depth-image segmentation and driver distraction monitoring.
#[derive(Debug, Parser)]
#[command(name = "depthseg", version)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split 16-bit PGM depth frames into depth intervals and grown regions.
    Segment {
        #[arg(required = true)]
        frames: Vec<PathBuf>,
    },
    /// Find the driver's body in each frame.
    LocateDriver {
        #[arg(required = true)]
        frames: Vec<PathBuf>,
    },
    /// Track depth changes against the first frame and raise distraction
    /// alerts. Takes a directory of frames or a list of files.
    Monitor {
        #[arg(required = true)]
        frames: Vec<PathBuf>,
    },
    /// Render a synthetic scene or sequence spec with ground truth.
    Synth { spec: PathBuf },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = cli.config.resolve()?;
    match cli.command {
        Command::Segment { frames } => {
            let report = commands::segment(&frames, &cfg)?;
            for r in &report.results {
                eprintln!(
                    "{}: {} intervals, {} regions",
                    r.input,
                    r.intervals.len(),
                    r.regions.len()
                );
            }
        }
        Command::LocateDriver { frames } => {
            let report = commands::locate_driver(&frames, &cfg)?;
            let mut missing = false;
            for r in &report.results {
                match r.driver_bbox {
                    Some(b) => eprintln!("{}: driver at x={} y={} w={} h={}", r.input, b.x, b.y, b.w, b.h),
                    None => eprintln!("{}: no driver found", r.input),
                }
                missing |= r.status == DriverStatus::NoDriverFound;
            }
            if missing {
                return Ok(EXIT_NO_DRIVER);
            }
        }
        Command::Monitor { frames } => {
            let stdout = io::stdout();
            let report = commands::monitor(&frames, &cfg, &mut stdout.lock())?;
            eprintln!(
                "{} frames, {} alerts, median step {:.2} ms",
                report.results.frame_count,
                report.results.alerts.len(),
                report.timings.median_ms
            );
        }
        Command::Synth { spec } => {
            let report = commands::synth(&spec, &cfg)?;
            eprintln!("wrote {} frames to {}", report.results.frames.len(), cfg.out.display());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("depthseg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
