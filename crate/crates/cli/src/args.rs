use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pbci",
    version,
    about = "Exact confidence regions for the mean of a Bernoulli chain"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the region for given n and level.
    Interval(IntervalArgs),
    /// Audit the coverage of a region, or evaluate it at one parameter vector.
    Coverage(CoverageArgs),
    /// Reproduce the known counterexamples and validity claims.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    OptimalLower,
    OptimalUpper,
    CpLower,
    CpUpper,
    TwoSidedCp,
    TwoSidedOptimal,
    Agnew,
    Sterne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    /// Builtin region; needs --n unless --p gives the length.
    #[arg(long, value_enum, conflicts_with = "region")]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Level to judge against; defaults to the region's own level.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Region document (JSON) to audit.
    #[arg(long)]
    pub region: Option<PathBuf>,
    /// Uniform audit grid spacing.
    #[arg(long, env = "PBCI_GRID", default_value_t = pbci::coverage::DEFAULT_GRID_RESOLUTION)]
    pub grid: f64,
    /// Comma-separated parameter vector; evaluates coverage at it only.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    R3,
    R4,
    R6,
    R8,
    R9,
    Sterne,
    Thm3,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    /// Run the r4 boundary sweep over n = 2..=3000 instead of n in {123, 124}.
    #[arg(long)]
    pub full: bool,
    #[arg(long, env = "PBCI_GRID", default_value_t = pbci::coverage::DEFAULT_GRID_RESOLUTION)]
    pub grid: f64,
}
