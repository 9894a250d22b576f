use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use collatz_fp::collatz::{CollatzMap, DEFAULT_CAP};
use collatz_fp::collatz_weights::ParityCase;
use collatz_fp::framework::LambdaSpec;
use collatz_fp::verifier::RangeSpec;
use collatz_fp::{Error, Point, Rational};

/// Exhaustive pair sweeps beyond this bound need `--allow-large`.
pub const LARGE_N: Point = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "collatz-fp",
    version,
    about = "Exact verification sweeps for weighted pseudocontractions and the accelerated Collatz map"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for sweeps (defaults to all cores).
    #[arg(long, global = true, env = "COLLATZ_FP_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the defining inequality for the explicit weights over a range of pairs.
    Verify(VerifyArgs),
    /// Check the triangle-gap and symmetrization lemmas.
    Lemmas(LemmasArgs),
    /// Per-case coverage of one of the theorem conditions.
    Conditions(ConditionsArgs),
    /// Trajectory of one seed under C or T.
    Orbit(OrbitArgs),
    /// Geometric decay along accelerated orbits.
    Decay(DecayArgs),
    /// Grid search over per-case λ values and A.
    SearchLambda(SearchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Six-term sum, `lhs ≤ 0`.
    Direct,
    /// Per-case closed forms, `lhs ≤ 0`.
    Simplified,
    /// Closed forms against the six-term sum.
    Cross,
    /// Six-term sum against the sharpened per-case bounds.
    Bounds,
    /// `|w| ≤ M` for the raw weights.
    MBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Lower bound for x and y.
    #[arg(long, default_value_t = 1)]
    pub min: Point,
    /// Upper bound for x and y.
    #[arg(long)]
    pub max: Point,
    #[arg(long)]
    pub x_min: Option<Point>,
    #[arg(long)]
    pub x_max: Option<Point>,
    #[arg(long)]
    pub y_min: Option<Point>,
    #[arg(long)]
    pub y_max: Option<Point>,
    /// Restrict to these parity cases (repeatable).
    #[arg(long = "case")]
    pub cases: Vec<ParityCase>,
    /// Permit bounds above 10⁴.
    #[arg(long)]
    pub allow_large: bool,
}

impl RangeArgs {
    pub fn spec(&self) -> Result<RangeSpec, Error> {
        let r = RangeSpec::new(
            self.x_min.unwrap_or(self.min),
            self.x_max.unwrap_or(self.max),
            self.y_min.unwrap_or(self.min),
            self.y_max.unwrap_or(self.max),
        )?;
        if !self.allow_large && r.x_max.max(r.y_max) > LARGE_N {
            return Err(Error::InvalidArgument(format!(
                "bounds above {LARGE_N} need --allow-large"
            )));
        }
        Ok(if self.cases.is_empty() {
            r
        } else {
            r.with_cases(self.cases.iter().copied())
        })
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, env = "COLLATZ_FP_OUTPUT")]
    pub output: Option<PathBuf>,
    /// Violations listed in the report; the total is always given.
    #[arg(long, default_value_t = 100)]
    pub max_violations: usize,
    /// Include wall-clock time in the report (makes output run dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ConditionArgs {
    /// λ-mapping: a rational, or `case=value` for all nine cases, comma separated.
    #[arg(long, default_value = "0")]
    pub lambda: LambdaSpec,
    #[arg(long = "B", default_value = "2")]
    pub b: Rational,
    #[arg(long = "M", default_value = "2")]
    pub m: Rational,
    #[arg(long, default_value_t = 3)]
    pub theorem: u8,
    #[arg(long, default_value_t = 5)]
    pub condition: u8,
    /// Read condition (4) with `δ + ζ + 2·min{γ, 0} > 0`.
    #[arg(long)]
    pub corrected_c4: bool,
    /// Apply the `M` bound to the symmetrized weights as well.
    #[arg(long)]
    pub m_symmetrized: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, value_enum, default_value_t = Mode::Direct)]
    pub mode: Mode,
    /// Weight bound for `--mode m-bound`.
    #[arg(long = "M", default_value = "2")]
    pub m: Rational,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LemmasArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    /// θ values for the triangle gap, comma separated.
    #[arg(
        long = "theta",
        allow_hyphen_values = true,
        value_delimiter = ',',
        default_value = "-3,-5/2,-2,-1,0,1/2,1,2,3"
    )]
    pub thetas: Vec<Rational>,
    /// λ-mappings for the symmetrization check (repeatable).
    #[arg(long = "lambda", default_values = ["0", "1/4", "1/2", "3/4", "1"])]
    pub lambdas: Vec<LambdaSpec>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConditionsArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub condition: ConditionArgs,
    #[arg(long = "A", default_value = "1/2")]
    pub a: Rational,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub seed: Point,
    #[arg(long, default_value = "T")]
    pub map: CollatzMap,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    /// Include every visited value.
    #[arg(long)]
    pub path: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    /// First seed.
    #[arg(long, default_value_t = 1)]
    pub min: Point,
    /// Last seed.
    #[arg(long)]
    pub max: Point,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    #[arg(long, default_value = "0")]
    pub lambda: LambdaSpec,
    #[arg(long = "A", default_value = "1/2")]
    pub a: Rational,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    /// λ grid denominator; 0 forces λ ≡ 0.
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    /// Candidate values of A, comma separated.
    #[arg(long = "A", value_delimiter = ',', required = true)]
    pub a: Vec<Rational>,
    #[arg(long = "B", default_value = "2")]
    pub b: Rational,
    #[arg(long = "M", default_value = "2")]
    pub m: Rational,
    #[arg(long, default_value_t = 3)]
    pub theorem: u8,
    #[arg(long, default_value_t = 5)]
    pub condition: u8,
    #[arg(long)]
    pub corrected_c4: bool,
    #[arg(long)]
    pub m_symmetrized: bool,
    /// Maximum number of condition evaluations.
    #[arg(long, default_value_t = 1_000_000_000)]
    pub budget: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
