use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "trunclc",
    version,
    about = "Sample truncated log-concave distributions and measure how deep each sampler stays exact"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw variates from a truncated distribution.
    Sample(SampleArgs),
    /// Scan truncation depths for the point where each sampler breaks down.
    Scan(ScanArgs),
    /// Statistical checks of sampler output.
    #[command(subcommand)]
    Validate(ValidateCommand),
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Distribution family (normal, poisson, binomial, nbinom, geometric,
    /// gamma, exponential, invgauss, epd).
    #[arg(long)]
    pub dist: String,
    /// Parameter as name=value; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Excluded lower bound a of ]a, b]; -inf when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub lower: Option<f64>,
    /// Included upper bound b of ]a, b]; +inf when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub upper: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    #[arg(long, env = "TRUNCLC_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleMethod {
    #[value(alias = "ds")]
    Devroye,
    Its,
    #[value(alias = "hit-or-miss")]
    Hitormiss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Impute {
    Mode,
    Error,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SampleMethod::Devroye)]
    pub method: SampleMethod,
    #[command(flatten)]
    pub seed: SeedArg,
    /// What to return when a variate cannot be produced. Defaults to `mode`
    /// for devroye and hitormiss and to `error` for its, so that quantile
    /// overflow is reported rather than hidden.
    #[arg(long, value_enum)]
    pub impute: Option<Impute>,
    /// Cap on proposals (trials for hitormiss) per variate.
    #[arg(long, default_value_t = 10_000)]
    pub max_iterations: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanMethodArg {
    #[value(alias = "ds")]
    Devroye,
    Its,
    Both,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub dist: String,
    /// Fixed parameter as name=value; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Grid axis as name=start:stop:steps:{linear|log|logit}; repeatable.
    #[arg(long = "grid", value_name = "AXIS")]
    pub grids: Vec<String>,
    /// auto, geometric-progression, or lo:hi:step:linear.
    #[arg(long, default_value = "auto")]
    pub probe: String,
    /// Read lo:hi:step probes as lower bounds rather than depths in
    /// standard deviations.
    #[arg(long)]
    pub absolute: bool,
    #[arg(long, value_enum, default_value_t = ScanMethodArg::Both)]
    pub method: ScanMethodArg,
    #[arg(long, default_value_t = 1000)]
    pub n_probe: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Bisection resolution in base standard deviations.
    #[arg(long, default_value_t = 0.01)]
    pub resolution: f64,
    /// Also locate where the log-density stops being finite.
    #[arg(long)]
    pub dprime: bool,
    #[arg(long, default_value_t = 400)]
    pub max_probes: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    pub format: ReportFormat,
    /// Write the report here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ValidateCommand {
    /// Z-test of the sample mean against an exact truncated mean.
    Ztest(ZtestArgs),
    /// Q-Q table of the normal tail excess against exponential(a).
    Qq(QqArgs),
    /// Shifted excess of a geometric or exponential tail against the base law.
    Memoryless(MemorylessArgs),
}

#[derive(Debug, Args)]
pub struct ZtestArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Lower bounds as start:stop:step, one row each; overrides --lower.
    #[arg(long)]
    pub lower_grid: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// A row fails when |Z| reaches this value.
    #[arg(long, default_value_t = 3.5)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = SampleMethod::Devroye)]
    pub method: SampleMethod,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct QqArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MemorylessArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
