use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rankgain",
    version,
    about = "Certify rank gain of elliptic curves over cyclic extensions"
)]
#[command(args_conflicts_with_subcommands = true, allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a certificate for one parameter.
    Gain(GainArgs),
    /// Find a parameter meeting splitting constraints, then certify it.
    Search(SearchArgs),
    /// Exact splitting densities over residue fields.
    Density(DensityArgs),
    /// Re-check a certificate file.
    Verify(VerifyArgs),
    /// Run the exact identity suites.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Discriminant of the base field Q(sqrt d): -1 or -3.
    #[arg(long = "d", allow_negative_numbers = true)]
    pub d: i64,
    /// Coefficient A, e.g. `2`, `-1/3` or `1/2+3*sqrt`.
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: String,
    /// Coefficient B.
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: String,
    /// Degree of the cyclic extension: 2, 3, 4 or 6.
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GainArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// The parameter: lambda, or omega for n = 6.
    #[arg(long, allow_hyphen_values = true)]
    pub param: String,
    /// Also write the certificate JSON here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// `p[/root]:irreducible` or `p[/root]:split`; repeatable.
    #[arg(long = "constraint", value_name = "PRIME:BEHAVIOR")]
    pub constraints: Vec<String>,
    /// Largest integer parameter tried.
    #[arg(long, default_value_t = 10_000)]
    pub bound: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// `p` or `p/root`; repeatable.
    #[arg(long = "prime", required = true)]
    pub primes: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Certificate file, or `-` for standard input.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}
