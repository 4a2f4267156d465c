//! Command-line front end. [`dispatch`] parses an argument vector, runs one
//! subcommand and writes data to `out` and diagnostics to `err`.
//!
//! Exit status: 0 on success, 1 on an output failure, 2 on a usage error
//! (nothing is written to `out`), 3 when a factoring budget ran out and some
//! results are partial.

mod commands;
mod parse;
mod rows;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `{"schema":1}` followed by one JSON object per line.
    Jsonl,
    /// A header line and flat columns.
    Csv,
    /// Human-readable lines.
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "smoothdigits",
    version,
    about = "Sparse digit expansions, smooth numbers and explicit bounds"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "jsonl")]
    pub format: Format,
    /// Worker threads for surveys; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ordered sparse, power-sum or smooth streams.
    Enum(EnumArgs),
    /// Factor integers and report P, omega, Q and the S-part.
    Factor(FactorArgs),
    /// Trace the two-branch argument on one integer.
    Trace(TraceArgs),
    /// Linear-form bounds, threshold functions and gap constants.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Sparse-sequence and Stewart surveys.
    #[command(subcommand)]
    Survey(SurveyCommand),
    /// Build 2^n + 1 from cyclotomic values.
    Cyclo(CycloArgs),
    /// Smooth integers with few nonzero digits.
    Search(SearchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StreamKind {
    Sparse,
    PowerSum,
    Smooth,
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    #[arg(long, value_enum, default_value = "sparse")]
    pub kind: StreamKind,
    /// Base of the sparse stream.
    #[arg(long)]
    pub base: Option<u64>,
    /// Fixed bound on nonzero digits.
    #[arg(long)]
    pub k: Option<u32>,
    /// Digit budget `family:c` instead of `--k`.
    #[arg(long = "f")]
    pub budget: Option<String>,
    /// Bases of a power sum, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub bases: Vec<u64>,
    /// Require the power-sum bases to share a divisor.
    #[arg(long)]
    pub shared_divisor: bool,
    /// Prime set of a smooth stream, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Number of terms.
    #[arg(long)]
    pub take: Option<usize>,
    /// Largest value.
    #[arg(long)]
    pub max: Option<String>,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    /// Integers, in decimal or as sums of powers such as 2^64+1.
    #[arg(required = true)]
    pub numbers: Vec<String>,
    /// Prime set for the S-part.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Factoring effort in modular multiplications.
    #[arg(long, default_value_t = smoothdigits::factor::Budget::DEFAULT_EFFORT)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Integer to trace.
    pub n: String,
    /// Base of its digit expansion.
    #[arg(long)]
    pub base: u64,
    /// Factoring effort in modular multiplications.
    #[arg(long, default_value_t = smoothdigits::factor::Budget::DEFAULT_EFFORT)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct LinearFormArgs {
    /// Rationals `x/y`, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub rationals: Vec<String>,
    /// Integer exponents, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub exponents: Vec<i64>,
    /// Heights; default `max(|x|, |y|, e)`.
    #[arg(long, value_delimiter = ',')]
    pub heights: Vec<f64>,
    /// `B`; default `max(3, |b_i|)`.
    #[arg(long)]
    pub exponent_bound: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Lower bound for log |Lambda|.
    Matveev(LinearFormArgs),
    /// Upper bound for v_p(Lambda).
    Yu {
        #[command(flatten)]
        form: LinearFormArgs,
        /// The prime p.
        #[arg(long)]
        p: u64,
    },
    /// Every threshold function at one integer.
    Thresholds(ThresholdArgs),
    /// Constants of the digit/prime-gap inequality and the top-exponent bound.
    Gap {
        #[arg(long)]
        base: u64,
        /// Number of nonzero digits.
        #[arg(long)]
        k: usize,
        /// Prime set S, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Integer or size at which the thresholds are evaluated.
    #[arg(long)]
    pub n: String,
    /// Digit bound for the sparse and power-sum thresholds.
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Epsilon subtracted from each leading coefficient.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Digit budget `family:c` for the budget threshold.
    #[arg(long = "f")]
    pub budget: Option<String>,
    /// Overrides the budget family's delta0.
    #[arg(long)]
    pub delta0: Option<f64>,
    /// Greatest prime factor of n, for the cyclotomic constant.
    #[arg(long = "gpf")]
    pub greatest_prime: Option<String>,
    /// Base for the nonzero-digit count of the smooth/digit rows.
    #[arg(long, default_value_t = 2)]
    pub base: u64,
}

/// Default factoring effort per survey term, small enough that a survey of
/// a few hundred terms finishes in seconds.
pub const SURVEY_BUDGET: u64 = 1 << 16;

#[derive(Debug, Subcommand)]
pub enum SurveyCommand {
    /// Factor, threshold and trace the first J terms of a sparse sequence.
    Sparse {
        #[arg(long)]
        base: u64,
        /// Fixed bound on nonzero digits.
        #[arg(long)]
        k: Option<u32>,
        /// Digit budget `family:c` instead of `--k`; needs `--max`.
        #[arg(long = "f")]
        budget: Option<String>,
        /// Number of terms J.
        #[arg(long)]
        count: usize,
        /// Stop at this value.
        #[arg(long)]
        max: Option<String>,
        /// Factoring effort per term.
        #[arg(long = "effort", default_value_t = SURVEY_BUDGET)]
        effort: u64,
        /// Epsilon for the threshold comparisons.
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Overrides the budget family's delta0.
        #[arg(long)]
        delta0: Option<f64>,
        /// Emit dyadic window minima of P instead of terms.
        #[arg(long)]
        windows: bool,
    },
    /// Nonzero digits of a^n in base b against log n / (2 log log n).
    Stewart {
        /// The integer a; must be multiplicatively independent of the base.
        #[arg(long)]
        a: u64,
        #[arg(long)]
        base: u64,
        /// First exponent n.
        #[arg(long, default_value_t = 3)]
        from: u64,
        /// Last exponent n.
        #[arg(long)]
        to: u64,
    },
}

#[derive(Debug, Args)]
pub struct CycloArgs {
    /// Exponent n of 2^n + 1.
    #[arg(long)]
    pub n: u64,
    /// Factoring effort per cyclotomic value.
    #[arg(long, default_value_t = smoothdigits::factor::Budget::DEFAULT_EFFORT)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub base: u64,
    /// Largest number of nonzero digits.
    #[arg(long)]
    pub k: usize,
    /// Prime set S, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub primes: Vec<u64>,
    /// Largest value searched.
    #[arg(long)]
    pub limit: String,
    /// Epsilon for the S-unit digit threshold.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
}

/// How a command ended.
#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    /// Nothing could be computed within the factoring budget.
    Budget(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<smoothdigits::Error> for Failure {
    fn from(e: smoothdigits::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

/// Runs the command line `argv` (program name first).
pub fn dispatch(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    if cli.threads == Some(0) {
        let _ = writeln!(err, "error: --threads must be at least 1");
        return EXIT_USAGE;
    }
    // Output is buffered until the command has validated its inputs, so a
    // usage error never leaves partial data behind.
    let mut buffer = commands::Buffered::new(out);
    let result = commands::run(&cli, &mut buffer);
    match result {
        Ok(partial) => {
            if buffer.finish().is_err() {
                return EXIT_IO;
            }
            if partial {
                let _ = writeln!(
                    err,
                    "warning: some factorizations are partial (budget exhausted)"
                );
                EXIT_PARTIAL
            } else {
                EXIT_OK
            }
        }
        Err(Failure::Usage(msg)) => {
            buffer.discard();
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Budget(msg)) => {
            buffer.discard();
            let _ = writeln!(err, "error: {msg}");
            EXIT_PARTIAL
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_IO
        }
    }
}
