use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Default seed when neither `--seed` nor `ESBOX_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "esbox", version, about = "Verify entanglement-swapping boxes and their communication bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check a box's standard-form structure.
    Verify(RunArgs),
    /// Run every communication claim that applies to a box.
    Report(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoxSelector {
    Teleport,
    TwirledTeleport,
    Random4,
    Random8,
    Ghz,
    BellFromGhz,
}

impl BoxSelector {
    pub fn name(self) -> &'static str {
        match self {
            BoxSelector::Teleport => "teleport",
            BoxSelector::TwirledTeleport => "twirled-teleport",
            BoxSelector::Random4 => "random4",
            BoxSelector::Random8 => "random8",
            BoxSelector::Ghz => "ghz",
            BoxSelector::BellFromGhz => "bell-from-ghz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Built-in box.
    #[arg(long = "box", value_enum, conflicts_with = "box_file", required_unless_present = "box_file")]
    pub selector: Option<BoxSelector>,
    /// Box in the JSON box-file format.
    #[arg(long)]
    pub box_file: Option<PathBuf>,
    #[arg(long, env = "ESBOX_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Random trials for the property suites.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[arg(long, default_value_t = 300)]
    pub iters: usize,
    /// Tolerance for algebraic identities.
    #[arg(long, default_value_t = 1e-10)]
    pub tol_algebra: f64,
    /// Slack allowed on optimizer outputs.
    #[arg(long, default_value_t = 1e-6)]
    pub tol_opt: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoxSource {
    Named(BoxSelector),
    File(PathBuf),
}

/// Everything one run needs, independent of how it was parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: BoxSource,
    pub seed: u64,
    pub trials: usize,
    pub restarts: usize,
    pub iters: usize,
    pub tol_algebra: f64,
    pub tol_opt: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn named(selector: BoxSelector) -> Self {
        RunConfig {
            source: BoxSource::Named(selector),
            seed: DEFAULT_SEED,
            trials: 1000,
            restarts: 200,
            iters: 300,
            tol_algebra: 1e-10,
            tol_opt: 1e-6,
            format: Format::Text,
            out: None,
        }
    }
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        let source = match (a.selector, a.box_file) {
            (_, Some(path)) => BoxSource::File(path),
            (Some(sel), None) => BoxSource::Named(sel),
            (None, None) => unreachable!("clap requires one of --box and --box-file"),
        };
        RunConfig {
            source,
            seed: a.seed,
            trials: a.trials,
            restarts: a.restarts,
            iters: a.iters,
            tol_algebra: a.tol_algebra,
            tol_opt: a.tol_opt,
            format: a.format,
            out: a.out,
        }
    }
}
