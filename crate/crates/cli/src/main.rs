//! `msfbench` — corrupt KITTI-format datasets, evaluate prediction files,
//! and aggregate robustness reports.
//!
//! Exit codes: 0 success, 2 partial failure (some frames failed), 64 usage
//! error, 65 input data error, 66 missing input.

mod commands;
mod exit;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use exit::{CliError, EXIT_PARTIAL, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "msfbench",
    version,
    about = "Corruption synthesis and robustness scoring for camera+LiDAR perception datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one corruption pattern to a KITTI-layout dataset.
    Corrupt(CorruptArgs),
    /// Score prediction files against ground truth.
    Evaluate(EvaluateArgs),
    /// Aggregate run results into a robustness report.
    Report(ReportArgs),
}

#[derive(Args)]
struct CorruptArgs {
    /// Input dataset directory (velodyne/, image_2/, calib/).
    #[arg(long = "in", value_name = "DIR")]
    input: std::path::PathBuf,
    /// Output dataset directory.
    #[arg(long = "out", value_name = "DIR")]
    output: std::path::PathBuf,
    /// Pattern code: RN FG BR DK DT MB DB GN_C GN_L IN_C IN_L SM TM LOSS_C LOSS_L.
    #[arg(long)]
    pattern: String,
    /// Severity level (1-3; 1-5 for TM and LOSS patterns).
    #[arg(long)]
    severity: u8,
    /// Master seed; every frame derives its own stream from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Raw physical parameter overriding the severity table
    /// (mm/h, meters, degrees, seconds, or a fraction, per pattern).
    #[arg(long)]
    param: Option<f64>,
    /// Rotation axis for SM (default y).
    #[arg(long)]
    axis: Option<String>,
    /// Delayed branch for TM (default lidar).
    #[arg(long)]
    branch: Option<String>,
    /// Severity table override file (TOML); MSF_BENCH_CONFIG works too.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Task: detection, tracking, or depth.
    #[arg(long)]
    task: String,
    /// Ground-truth directory (or file, for tracking).
    #[arg(long)]
    gt: std::path::PathBuf,
    /// Prediction directory (or file, for tracking).
    #[arg(long)]
    pred: std::path::PathBuf,
    /// Where to write the RunResult JSON.
    #[arg(long, default_value = "run_result.json")]
    out: std::path::PathBuf,
    /// Corruption pattern code the predictions were produced under.
    #[arg(long, default_value = "clean")]
    pattern: String,
    /// Severity level for a corrupted run.
    #[arg(long)]
    severity: Option<u8>,
    /// Detection/tracking matching threshold override.
    #[arg(long)]
    iou_threshold: Option<f64>,
}

#[derive(Args)]
struct ReportArgs {
    /// RunResult JSON for the clean baseline.
    #[arg(long)]
    clean: std::path::PathBuf,
    /// RunResult JSONs for corrupted runs.
    #[arg(long = "corrupted", value_name = "FILE", num_args = 1.., required = true)]
    corrupted: Vec<std::path::PathBuf>,
    /// Output directory for the rendered report files.
    #[arg(long, default_value = ".")]
    out_dir: std::path::PathBuf,
    /// Formats to render: json, csv, markdown (comma-separated).
    #[arg(long, default_value = "json")]
    format: String,
    /// Severity table override, hashed into report metadata.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Seed recorded in report metadata.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let outcome = match cli.command {
        Command::Corrupt(args) => commands::corrupt(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Report(args) => commands::report(args),
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::PartialFailure { failed, total }) => {
            eprintln!("{failed} of {total} frames failed; see manifest for details");
            ExitCode::from(EXIT_PARTIAL)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
