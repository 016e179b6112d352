//! `trained-filter` — degrade, enhance, train, repair and score image
//! sequences with classification-based least-squares filters.

mod commands;
mod embodiment;
mod media;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use embodiment::EmbodimentKind;

const STAGE_HELP: &str = "\
Stage names used in CSV output and generated file names:
  degraded  the simulated low-quality source (blocky, blurred, or down-scaled)
  enhanced  the cheap enhancement module's output (smoothed, peaked, or up-scaled)
  repaired  the trained filter's output

Inputs ending in .pgm are binary 8-bit PGM images; anything else is read as
headerless raw YUV 4:2:2 planar video, which needs --width and --height.";

#[derive(Parser)]
#[command(
    name = "trained-filter",
    version,
    about = "Repair low-quality video enhancement modules with trained least-squares filters",
    after_long_help = STAGE_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an embodiment's degradation to an input.
    Degrade(StageCmd),
    /// Apply an embodiment's enhancement module to an input.
    Enhance(StageCmd),
    /// Train a coefficient table: degrade and enhance a pristine corpus
    /// internally, then fit per-class filters against the originals.
    Train(TrainCmd),
    /// Repair an enhanced input with a trained coefficient table.
    Repair(RepairCmd),
    /// Score a candidate against a reference and emit a CSV row.
    Evaluate(EvaluateCmd),
    /// Full study: train on a corpus, then degrade/enhance/repair each test
    /// input and emit a CSV table of per-stage scores.
    Experiment(ExperimentCmd),
}

#[derive(Args)]
struct GeometryArgs {
    /// Frame width in pixels (required for raw YUV inputs).
    #[arg(long, global = true)]
    width: Option<usize>,
    /// Frame height in pixels (required for raw YUV inputs).
    #[arg(long, global = true)]
    height: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ClassModeArg {
    /// Plain 13-bit ADRC classes.
    None,
    /// ADRC plus a standard-deviation bit.
    Std,
    /// ADRC plus a dynamic-range bit.
    Dr,
    /// ADRC plus a histogram-entropy bit.
    Entropy,
}

#[derive(Args)]
struct PipelineArgs {
    /// Which repair scenario to run.
    #[arg(long, value_enum, default_value_t = EmbodimentKind::Deblock)]
    embodiment: EmbodimentKind,
    /// Compression quality for the deblock degradation (1-100).
    #[arg(long)]
    quality: Option<u8>,
    /// Gaussian kernel radius for blur-based stages.
    #[arg(long)]
    radius: Option<usize>,
    /// Gaussian kernel sigma for blur-based stages.
    #[arg(long)]
    sigma: Option<f64>,
    /// Peaking gain for the deblur enhancement.
    #[arg(long)]
    alpha: Option<f64>,
    /// Complexity bit mode, overriding the embodiment's default classifier.
    #[arg(long, value_enum)]
    class_mode: Option<ClassModeArg>,
    /// Threshold for the selected complexity bit.
    #[arg(long)]
    class_threshold: Option<f64>,
}

#[derive(Args)]
struct TrainingArgs {
    /// Minimum training pairs a class needs before its system is solved
    /// (classes below this keep the identity filter).
    #[arg(long, default_value_t = 26)]
    min_samples: u64,
    /// Ridge regularization weight added to the normal-equation diagonal.
    #[arg(long, default_value_t = 0.0)]
    ridge: f64,
    /// Cap on the number of frames taken from each training sequence.
    #[arg(long)]
    max_frames: Option<usize>,
}

#[derive(Args)]
struct StageCmd {
    /// Input image (.pgm) or raw YUV 4:2:2 sequence.
    input: PathBuf,
    /// Output file (same format as the input).
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct TrainCmd {
    /// Pristine training inputs: files and/or directories of .pgm / raw YUV.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Output path for the trained coefficient table.
    #[arg(long)]
    lut: PathBuf,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    training: TrainingArgs,
}

#[derive(Args)]
struct RepairCmd {
    /// Enhanced input to repair (.pgm or raw YUV 4:2:2).
    input: PathBuf,
    /// Trained coefficient table to apply.
    #[arg(long)]
    lut: PathBuf,
    /// Output file (same format as the input).
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct EvaluateCmd {
    /// Reference input.
    reference: PathBuf,
    /// Candidate input to score against the reference.
    candidate: PathBuf,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stage label for the CSV row.
    #[arg(long, default_value = "candidate")]
    stage: String,
    #[command(flatten)]
    geometry: GeometryArgs,
}

#[derive(Args)]
struct ExperimentCmd {
    /// Held-out test inputs to degrade, enhance, repair and score.
    #[arg(required = true)]
    test_inputs: Vec<PathBuf>,
    /// Pristine training inputs: files and/or directories.
    #[arg(long, required = true, num_args = 1..)]
    corpus: Vec<PathBuf>,
    /// Output directory for the table, CSV and per-stage files.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    training: TrainingArgs,
}

/// Exit statuses promised by the interface: 0 success, 1 usage error,
/// 2 I/O or format error, 3 internal invariant violation.
fn exit_code_for(error: &trained_filter::Error) -> u8 {
    match error {
        trained_filter::Error::InvalidParameter(_) => 1,
        trained_filter::Error::Internal(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Degrade(cmd) => commands::degrade(cmd),
        Command::Enhance(cmd) => commands::enhance(cmd),
        Command::Train(cmd) => commands::train(cmd),
        Command::Repair(cmd) => commands::repair(cmd),
        Command::Evaluate(cmd) => commands::evaluate(cmd),
        Command::Experiment(cmd) => commands::experiment(cmd),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
