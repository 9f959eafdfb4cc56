use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use dirac_hardy::constants::RadialPower;
use dirac_hardy::radial::Weight;

use crate::output::Format;

fn parsed<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "dirac-hardy",
    version,
    about = "Sharp Hardy constants for the weighted Dirac form, with reproducible verification reports",
    after_help = "Any subcommand accepts --config FILE with key=value lines; flags on the command line override it.\n\
                  Exit codes: 0 all checks pass, 1 a check failed, 2 usage error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format; defaults to csv for tables, json for spectrum and full-suite.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write `<command>.<ext>` and `<command>.report.json` here.
    #[arg(long, env = "DIRAC_HARDY_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    /// key=value run file (flags win).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form c_b over a b grid, cross-checked against a mode window.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Constants(ConstantsArgs),
    /// Smallest eigenvalue of one radial mode against its closed form.
    #[command(name = "verify-mode", args_override_self = true, allow_negative_numbers = true)]
    VerifyMode(ModeArgs),
    /// Degenerate mode under the annulus mean-zero constraint.
    #[command(
        name = "verify-constrained",
        args_override_self = true,
        allow_negative_numbers = true
    )]
    VerifyConstrained(ConstrainedArgs),
    /// Floor over the modes next to the degenerate one.
    #[command(name = "excluded-mode", args_override_self = true, allow_negative_numbers = true)]
    ExcludedMode(ExcludedArgs),
    /// Exact spectrum of the angular operator by degree.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Cartesian lattice quadrature against the radial reduction.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Oracle(OracleArgs),
    /// Iterated-log remainder terms on a bump family.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Remainder(RemainderArgs),
    /// The pinned verification battery.
    #[command(name = "full-suite", args_override_self = true)]
    FullSuite(SuiteArgs),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Constants(a) => &a.common,
            Command::VerifyMode(a) => &a.common,
            Command::VerifyConstrained(a) => &a.common,
            Command::ExcludedMode(a) => &a.common,
            Command::Spectrum(a) => &a.common,
            Command::Oracle(a) => &a.common,
            Command::Remainder(a) => &a.common,
            Command::FullSuite(a) => &a.common,
        }
    }
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub n: usize,
    /// Single b; overrides the range.
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, default_value_t = -2.0)]
    pub b_from: f64,
    #[arg(long, default_value_t = 2.0)]
    pub b_to: f64,
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
    /// Brute-force window |k| <= W.
    #[arg(long, default_value_t = 12)]
    pub window: i64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ModeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub k: i64,
    #[arg(long = "T-list", value_delimiter = ',', default_value = "5,10,20")]
    pub t_list: Vec<f64>,
    /// Interior grid points.
    #[arg(long, default_value_t = 3999)]
    pub points: usize,
    /// Relative tolerance against the closed form.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ConstrainedArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub b: f64,
    /// Mode; defaults to the degenerate one.
    #[arg(long)]
    pub k: Option<i64>,
    #[arg(long = "T-list", value_delimiter = ',', default_value = "5,10,20")]
    pub t_list: Vec<f64>,
    /// Fixed interior points; otherwise N = 1000·T.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = 1000.0)]
    pub spacing_ratio: f64,
    #[arg(long, default_value = "log-squared", value_parser = parsed::<Weight>)]
    pub weight: Weight,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub annulus: Vec<f64>,
    /// p in the constraint measure r^p dr.
    #[arg(long, default_value_t = 1.0)]
    pub radial_power: f64,
    #[arg(long, default_value_t = 0.01)]
    pub floor: f64,
    #[arg(long, default_value_t = 2.0)]
    pub max_ratio: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ExcludedArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub b: f64,
    #[arg(long = "T", default_value_t = 50.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub spacing_ratio: f64,
    /// Accepted excess of the floor over 1.
    #[arg(long, default_value_t = 1e-3)]
    pub band: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: usize,
    /// Highest homogeneous degree.
    #[arg(long)]
    pub degree: u32,
    /// Generators as JSON instead of the built-in ones.
    #[arg(long, value_name = "FILE")]
    pub generators: Option<PathBuf>,
    #[arg(long)]
    pub with_basis: bool,
    #[arg(long, default_value_t = dirac_hardy::angular::DEFAULT_BASIS_CAP)]
    pub basis_cap: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// One or more b values.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub b: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub k: i64,
    /// Lattice spacings; default span/50, span/100, span/200.
    #[arg(long, value_delimiter = ',')]
    pub h_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1.5")]
    pub annulus: Vec<f64>,
    #[arg(long, default_value_t = 0.02)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct RemainderArgs {
    /// literal, inverse-square or both.
    #[arg(long, default_value = "both")]
    pub variant: String,
    #[arg(long = "K", value_delimiter = ',', default_value = "1,2")]
    pub levels: Vec<usize>,
    #[arg(long = "R", default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub b: f64,
    /// corrected (r^{-b-2}) or printed (r^{-2}).
    #[arg(long, default_value = "corrected", value_parser = parsed::<RadialPower>)]
    pub power: RadialPower,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Subset of groups, in battery order by default.
    #[arg(long, value_delimiter = ',')]
    pub groups: Vec<String>,
    /// Extra generator set to check for the Clifford relations.
    #[arg(long, value_name = "FILE")]
    pub generators: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}
