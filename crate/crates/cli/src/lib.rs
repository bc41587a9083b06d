//! Command-line driver: runs query algorithms on file or random matrices,
//! sweeps the oracle equivalences and tabulates the theory-side bounds.

pub mod commands;
pub mod input;
pub mod report;
pub mod source;

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{Check, Format, Report};

/// Bad arguments or inputs (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(name = "mvlab", version, about = "Query algorithms and lower bounds for matrix-vector product oracles")]
pub struct Cli {
    /// RNG seed (drawn from entropy when omitted; always echoed)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest matrix dimension accepted
    #[arg(long, global = true, default_value_t = 64)]
    pub max_dim: usize,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the transpose, VMV-from-MV and MV-phase-from-VMV circuits
    OracleCheck(OracleCheckArgs),
    /// Quantum trace over F₂ with ⌈n/2⌉ queries
    Trace(TraceArgs),
    /// Row and column parities with one quantum query each
    Parities(SourceArgs),
    /// Row and column parities from classical VMV queries
    VmvParities(SourceArgs),
    /// Identical rows or columns from random products
    Identical(IdenticalArgs),
    /// Row and column majorities of a 0/1 real matrix with one query each
    Majority(MajorityArgs),
    /// Theory tables
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Nullity profile Q(d) of a test circuit and its low-degree fit
    Symmetrize(SymmetrizeArgs),
    /// Full-rank testing through a linear-system solver on a padded matrix
    SolveReduction(SolveReductionArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Exhaustive,
    Random,
}

#[derive(Args, Debug)]
pub struct OracleCheckArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SweepMode::Exhaustive)]
    pub mode: SweepMode,
    /// Instances in random mode
    #[arg(long, default_value_t = 100)]
    pub count: usize,
}

/// Where the matrices come from. Exactly one of `--matrix`, `--all` and
/// `--random` applies; a lone file is the default.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Matrix file, or `-` for stdin
    #[arg(long, conflicts_with_all = ["all", "random"])]
    pub matrix: Option<PathBuf>,
    /// Every matrix of the given shape
    #[arg(long, conflicts_with = "random")]
    pub all: bool,
    /// This many seeded random matrices
    #[arg(long, value_name = "COUNT")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Query budget for the theory column (defaults to ⌈n/2⌉)
    #[arg(long)]
    pub queries: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Rows,
    Columns,
}

#[derive(Args, Debug)]
pub struct IdenticalArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum, default_value_t = Axis::Rows)]
    pub axis: Axis,
    /// Copy one random row (or column) over another in each instance
    #[arg(long)]
    pub planted: bool,
    /// Random queries per instance (defaults to 2⌈log₂ k⌉)
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Args, Debug)]
pub struct MajorityArgs {
    /// File of 0/1 rows, or `-` for stdin
    #[arg(long, conflicts_with = "random")]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_name = "COUNT")]
    pub random: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundMode {
    BruteForce,
    Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstraintSet {
    RankTesting,
    UnitInterval,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Optimal t-query trace success over a grid of (n, t)
    Trace {
        /// Largest n in the grid
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u64,
        /// Restrict the grid to this budget
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, value_enum, default_value_t = BoundMode::BruteForce)]
        mode: BoundMode,
    },
    /// Exact identification probability |R_t|/q^(mn) for t = 0..min(m, n)
    Discrimination {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
    /// Number of m×n matrices of each rank
    Count {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u64,
        /// Cross-check against rank enumeration (q^(mn) ≤ 2^16)
        #[arg(long)]
        verify: bool,
    },
    /// Least polynomial degree meeting interval constraints at ξ^0..ξ^(n-1)
    Degree {
        #[arg(long)]
        n: usize,
        /// Integer or fraction p/q
        #[arg(long, default_value = "2")]
        xi: String,
        #[arg(long, value_enum, default_value_t = ConstraintSet::RankTesting)]
        constraints: ConstraintSet,
        /// Solve in floating point instead of exact rationals
        #[arg(long)]
        float: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProfileMode {
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug)]
pub struct SymmetrizeArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    /// trace-guess, ones-in-kernel, zero-query or constant:<p>
    #[arg(long, default_value = "trace-guess")]
    pub circuit: String,
    /// Query count t; the fit degree is 2t (defaults to the circuit's count)
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value_t = ProfileMode::Exhaustive)]
    pub mode: ProfileMode,
    /// Samples per nullity in sampled mode
    #[arg(long, default_value_t = mvlab::bounds::MIN_SAMPLES)]
    pub samples: usize,
    /// Comma-separated hand-set profile Q(0),Q(1),... instead of a circuit
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct SolveReductionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Fresh paddings tried per end-to-end decision
    #[arg(long, default_value_t = mvlab::algorithms::DEFAULT_RETRY_CAP)]
    pub retry_cap: usize,
}

/// Settings shared by every command.
#[derive(Clone, Copy, Debug)]
pub struct Context {
    pub seed: u64,
    pub max_dim: usize,
}

pub fn run(cli: &Cli) -> Result<Report> {
    let ctx = Context { seed: cli.seed.unwrap_or_else(rand::random), max_dim: cli.max_dim };
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::OracleCheck(a) => commands::oracle_check::run(a, ctx),
        Command::Trace(a) => commands::trace::run(a, ctx),
        Command::Parities(a) => commands::parities::run(a, ctx, false),
        Command::VmvParities(a) => commands::parities::run(a, ctx, true),
        Command::Identical(a) => commands::identical::run(a, ctx),
        Command::Majority(a) => commands::majority::run(a, ctx),
        Command::Bounds(b) => commands::bounds::run(b, ctx),
        Command::Symmetrize(a) => commands::symmetrize::run(a, ctx),
        Command::SolveReduction(a) => commands::solve_reduction::run(a, ctx),
    }?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Exit code for an error: 2 for usage and input problems, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use mvlab::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(
            E::NotPrime(_)
            | E::ReducibleModulus(..)
            | E::MissingModulus { .. }
            | E::FieldTooLarge { .. }
            | E::InvalidElement(_)
            | E::DimensionMismatch(_)
            | E::NotSquare { .. }
            | E::CapExceeded(_)
            | E::Unsupported(_)
            | E::Parse(_)
            | E::NonBinary(_),
        ) => 2,
        Some(_) => 1,
        None if err.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some()) => 2,
        None => 1,
    }
}
