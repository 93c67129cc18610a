//! `mems`: concurrence sweeps, sudden-death zones, closed-form spectrum
//! checks and the MEMS/Werner comparison, written as CSV or JSON.
//!
//! Exit codes: 0 success, 1 bad arguments or out-of-domain parameters,
//! 2 spectrum discrepancies found by `verify-spectra`, 3 numerical
//! integrity failure.

mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mems::{ChannelKind, Engine};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DISCREPANCY: u8 = 2;
pub const EXIT_INTEGRITY: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "mems", version, about = "Entanglement of MEMS under local decoherence channels")]
pub struct Cli {
    /// Omit the `#` provenance header from outputs.
    #[arg(long, global = true)]
    pub no_manifest: bool,

    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence of Werner and MEMS states against gamma.
    CompareStates(CompareArgs),
    /// Concurrence against channel strength for one channel and gamma.
    Sweep(SweepArgs),
    /// Strength intervals where concurrence vanishes, as JSON.
    Zones(ZonesArgs),
    /// Closed-form spectra against the numerical spectra on a grid.
    VerifySpectra(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EngineArg {
    Numeric,
    Closedform,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Numeric => Engine::Numeric,
            EngineArg::Closedform => Engine::ClosedForm,
        }
    }
}

fn parse_channel(s: &str) -> Result<ChannelKind, String> {
    s.parse::<ChannelKind>().map_err(|e| {
        let names: Vec<_> = ChannelKind::ALL.iter().map(|k| k.name()).collect();
        format!("{e} (expected one of: {})", names.join(", "))
    })
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Also write a gnuplot script referencing the CSV (requires --out).
    #[arg(long, requires = "out")]
    pub plot_script: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StrengthRange {
    /// Lower end of the channel-strength domain.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub min: f64,
    /// Upper end of the channel-strength domain.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub max: f64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Number of gamma samples on [0, 1].
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub plot: PlotArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_channel)]
    pub channel: ChannelKind,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[command(flatten)]
    pub range: StrengthRange,
    /// Number of strength samples.
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// `closedform` adds a closed-form column next to the numerical one.
    #[arg(long, value_enum, default_value_t = EngineArg::Numeric)]
    pub engine: EngineArg,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub plot: PlotArgs,
}

#[derive(Debug, Args)]
pub struct ZonesArgs {
    #[arg(long, value_parser = parse_channel)]
    pub channel: ChannelKind,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[command(flatten)]
    pub range: StrengthRange,
    /// Grid points scanned before refinement.
    #[arg(long, default_value_t = mems::zonescan::DEFAULT_GRID_POINTS)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::Numeric)]
    pub engine: EngineArg,
    /// Bisection stops when the bracket is narrower than this.
    #[arg(long, default_value_t = mems::zonescan::DEFAULT_REFINE_TOL)]
    pub refine_tol: f64,
    /// Concurrence at or below this counts as zero.
    #[arg(long, default_value_t = mems::zonescan::DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Channel to check (default: all six).
    #[arg(long, value_parser = parse_channel)]
    pub channel: Option<ChannelKind>,
    #[command(flatten)]
    pub range: StrengthRange,
    /// Samples per axis of the (gamma, strength) grid.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Max elementwise deviation accepted per cell.
    #[arg(long, default_value_t = mems::spectra::SPECTRUM_TOL)]
    pub tol: f64,
    /// Discrepancy report (default: standard output).
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.into()).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let integrity = e
                .chain()
                .find_map(|c| c.downcast_ref::<mems::Error>())
                .is_some_and(mems::Error::is_integrity);
            ExitCode::from(if integrity { EXIT_INTEGRITY } else { EXIT_USAGE })
        }
    }
}
