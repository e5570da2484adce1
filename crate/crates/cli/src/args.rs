use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppareto::FamilyId;

#[derive(Debug, Parser)]
#[command(name = "ppareto", version, about = "Fit, sample and tabulate piecewise Pareto distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum-likelihood fit of one or more families, ranked by AIC
    Fit(FitArgs),
    /// Draw variates by inverse transform
    Sample(SampleArgs),
    /// Table of x, pdf and cdf for plotting
    Tabulate(TabulateArgs),
    /// Log-binned empirical density
    Hist(HistArgs),
    /// Closed-form fit of the Santa Fe contact-number model
    Santafe(SantaFeArgs),
}

/// A family name or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Uni,
    Pow,
    ForcedPow,
    Exp,
    ForcedExp,
    Alg,
    ForcedAlg,
    All,
}

impl FamilyArg {
    pub fn expand(self) -> Vec<FamilyId> {
        match self {
            FamilyArg::Uni => vec![FamilyId::Uni],
            FamilyArg::Pow => vec![FamilyId::Pow],
            FamilyArg::ForcedPow => vec![FamilyId::ForcedPow],
            FamilyArg::Exp => vec![FamilyId::Exp],
            FamilyArg::ForcedExp => vec![FamilyId::ForcedExp],
            FamilyArg::Alg => vec![FamilyId::Alg],
            FamilyArg::ForcedAlg => vec![FamilyId::ForcedAlg],
            FamilyArg::All => FamilyId::ALL.to_vec(),
        }
    }
}

/// A single family (no `all`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleFamily {
    Uni,
    Pow,
    ForcedPow,
    Exp,
    ForcedExp,
    Alg,
    ForcedAlg,
}

impl From<SingleFamily> for FamilyId {
    fn from(f: SingleFamily) -> Self {
        match f {
            SingleFamily::Uni => FamilyId::Uni,
            SingleFamily::Pow => FamilyId::Pow,
            SingleFamily::ForcedPow => FamilyId::ForcedPow,
            SingleFamily::Exp => FamilyId::Exp,
            SingleFamily::ForcedExp => FamilyId::ForcedExp,
            SingleFamily::Alg => FamilyId::Alg,
            SingleFamily::ForcedAlg => FamilyId::ForcedAlg,
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Observations, one per line (`#` comments and blank lines ignored)
    #[arg(long)]
    pub input: PathBuf,
    /// Families to fit; repeat the flag or separate with commas
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub family: Vec<FamilyArg>,
    /// Hold x_min fixed
    #[arg(long)]
    pub xmin: Option<f64>,
    /// Hold beta fixed (families with a free beta only)
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Report path; stdout when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Family and parameter values shared by `sample` and `tabulate`.
#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, value_enum)]
    pub family: SingleFamily,
    #[arg(long)]
    pub alpha: f64,
    /// Core shape; omit for uni, omit or equal alpha for the forced families
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub xmin: f64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Args)]
pub struct TabulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Largest x in the table; defaults to 100 x_min
    #[arg(long)]
    pub xmax: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// `log` starts at x_min / 1000, `linear` at 0
    #[arg(long, value_enum, default_value = "log")]
    pub spacing: Spacing,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HistArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub bins_per_decade: u32,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SantaFeArgs {
    /// Contact numbers, one integer per line
    #[arg(long)]
    pub input: PathBuf,
    /// System size
    #[arg(long = "N", id = "n_system")]
    pub n_system: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
