//! `acldpc`: construct, unwrap, simulate and analyze array LDPC codes.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "acldpc",
    version,
    about = "Array LDPC block and convolutional code toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the exponent matrix and expanded parity-check matrix of a code.
    Construct(ConstructArgs),
    /// Unwrap a code into the syndrome former of a convolutional code.
    Unwrap(UnwrapArgs),
    /// Monte Carlo BER/FER of the terminated convolutional code over AWGN.
    Simulate(SimulateArgs),
    /// Distance spectrum, truncated union bound and decoding threshold.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Serialize)]
pub struct ConstructArgs {
    /// Code description (JSON).
    pub spec: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Felstrom,
    Tanner,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminationArg {
    Zero,
    TailBiting,
}

/// Rate used to scale Eb/N0.
#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateArg {
    /// `(n0 - r0) / n0`.
    Design,
    /// `k / n` of the terminated block.
    Actual,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransmissionArg {
    AllZero,
    Encoded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMode {
    Mc,
    Impulse,
    Brute,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    Ga,
    Discretized,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundArg {
    Ber,
    Fer,
}

#[derive(Args, Serialize)]
pub struct UnwrapArgs {
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value = "felstrom")]
    pub method: Method,
    #[arg(long)]
    pub out: PathBuf,
}

/// How the convolutional code is cut to a block.
#[derive(Args, Serialize)]
pub struct RealizationArgs {
    #[arg(long, value_enum, default_value = "felstrom")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "zero")]
    pub termination: TerminationArg,
    #[arg(long, value_enum, default_value = "design")]
    pub rate: RateArg,
}

#[derive(Args, Serialize)]
pub struct SimulateArgs {
    pub spec: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated values or `start:step:stop`, in dB.
    #[arg(long)]
    pub ebno_grid: String,
    /// Code bits per transmitted block; must be a multiple of n0.
    #[arg(long, default_value_t = 60000)]
    pub block_bits: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, env = "ACLDPC_WORKERS", default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 100)]
    pub min_frame_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_frames: u64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value = "all-zero")]
    pub transmission: TransmissionArg,
    #[command(flatten)]
    pub realization: RealizationArgs,
}

#[derive(Args, Serialize)]
pub struct AnalyzeArgs {
    pub spec: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub distance: Option<DistanceMode>,
    /// Write a truncated union bound from the spectrum of this run or `--spectrum`.
    #[arg(long)]
    pub tub: bool,
    #[arg(long, value_enum)]
    pub threshold: Option<ThresholdMode>,
    #[command(flatten)]
    pub realization: RealizationArgs,
    /// Block periods of the searched code; defaults to twice the modulus.
    #[arg(long)]
    pub periods: Option<usize>,
    /// Impulse search: largest pattern weight.
    #[arg(long, default_value_t = 2)]
    pub max_weight: usize,
    /// Impulse search: LLR of bits outside the pattern.
    #[arg(long, default_value_t = 4.0)]
    pub background: f64,
    /// Impulse search: comma-separated impulse magnitudes.
    #[arg(long, default_value = "8,16,32")]
    pub amplitudes: String,
    /// Impulse search: start patterns at every bit, not only the first period.
    #[arg(long)]
    pub all_anchors: bool,
    /// Decoder iterations for the searches.
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1000)]
    pub mc_frames: u64,
    #[arg(long, default_value_t = 3.0)]
    pub mc_ebno: f64,
    /// Brute force: largest weight listed; defaults to the block length.
    #[arg(long)]
    pub weight_cap: Option<usize>,
    /// Spectrum JSON for `--tub` when no distance search runs.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[arg(long, default_value = "0:0.5:6")]
    pub ebno_grid: String,
    #[arg(long, value_enum, default_value = "ber")]
    pub bound: BoundArg,
    /// Variable degree of the threshold ensemble; defaults to r0.
    #[arg(long)]
    pub dv: Option<usize>,
    /// Check degree of the threshold ensemble; defaults to n0.
    #[arg(long)]
    pub dc: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, env = "ACLDPC_WORKERS", default_value_t = 1)]
    pub workers: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Unwrap(a) => commands::unwrap(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Analyze(a) => commands::analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
