//! Subcommand implementations.

use std::io::{self, Write};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use smoothdigits::bounds::linear_forms::ln_abs_rational;
use smoothdigits::bounds::{
    budget_gpf_threshold, cyclotomic_c_min, gap_constants, matveev_lower_bound,
    power_sum_gpf_threshold, s_unit_digit_threshold, smooth_digit_check, sparse_gpf_threshold,
    top_exponent_bound, trace, yu_valuation_bound, BoundInput, Height, Threshold, ThresholdParams,
};
use smoothdigits::digits::nz_count;
use smoothdigits::enumerate::{
    power_sum_sequence, smooth_sequence, sparse_sequence, sparse_sequence_bounded,
    sparse_sequence_f, DigitBudget, PowerSumSpec, SparseSpec,
};
use smoothdigits::experiments::output::{CsvWriter, JsonlWriter, Row};
use smoothdigits::experiments::{
    cyclotomic_smooth, smooth_sparse_search, sparse_survey, stewart_survey, FactorRow,
    SurveyConfig, WindowAggregator,
};
use smoothdigits::factor::{factorize, p_adic_valuation, Budget, PrimeSet};

use crate::rows::{
    trace_csv, trace_text, EnumRow, GapRow, LinearFormRow, ThresholdRow, TraceOutput,
    TRACE_CSV_HEADER,
};
use crate::{
    BoundsCommand, Cli, Command, EnumArgs, Failure, Format, LinearFormArgs, StreamKind,
    SurveyCommand, ThresholdArgs,
};

/// Holds output in memory until [`Buffered::commit`], then passes it through.
pub struct Buffered<'a> {
    inner: &'a mut dyn Write,
    pending: Option<Vec<u8>>,
}

impl<'a> Buffered<'a> {
    pub fn new(inner: &'a mut dyn Write) -> Self {
        Buffered {
            inner,
            pending: Some(Vec::new()),
        }
    }

    /// Inputs are valid: flush what is held and stream from now on.
    pub fn commit(&mut self) -> io::Result<()> {
        if let Some(held) = self.pending.take() {
            self.inner.write_all(&held)?;
        }
        Ok(())
    }

    pub fn discard(&mut self) {
        self.pending = Some(Vec::new());
    }

    pub fn finish(&mut self) -> io::Result<()> {
        self.commit()?;
        self.inner.flush()
    }
}

impl Write for Buffered<'_> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match &mut self.pending {
            Some(held) => held.write(buf),
            None => self.inner.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match &self.pending {
            Some(_) => Ok(()),
            None => self.inner.flush(),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn integer(s: &str) -> Result<BigUint, Failure> {
    crate::parse::integer(s).map_err(Failure::Usage)
}

fn prime_set(primes: &[u64]) -> Result<PrimeSet, Failure> {
    Ok(PrimeSet::new(primes.to_vec())?)
}

fn budget_spec(s: &str) -> Result<DigitBudget, Failure> {
    Ok(s.parse::<DigitBudget>()?)
}

/// Writes `rows` in `format`; `inspect` sees each row before it is written.
fn emit<T: Row>(
    format: Format,
    out: &mut Buffered,
    rows: impl IntoIterator<Item = T>,
    mut inspect: impl FnMut(&T),
) -> io::Result<()> {
    out.commit()?;
    match format {
        Format::Jsonl => {
            let mut w = JsonlWriter::new(&mut *out)?;
            for r in rows {
                inspect(&r);
                w.write(&r)?;
            }
        }
        Format::Csv => {
            let mut w = CsvWriter::new::<T>(&mut *out)?;
            for r in rows {
                inspect(&r);
                w.write(&r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in rows {
                inspect(&r);
                writeln!(out, "{}", r.text())?;
            }
        }
    }
    Ok(())
}

pub fn run(cli: &Cli, out: &mut Buffered) -> Outcome {
    let format = cli.format;
    match &cli.command {
        Command::Enum(args) => enumerate(format, out, args),
        Command::Factor(args) => {
            let numbers = args
                .numbers
                .iter()
                .map(|s| integer(s))
                .collect::<Result<Vec<_>, _>>()?;
            if numbers.iter().any(Zero::is_zero) {
                return usage("cannot factor 0");
            }
            let primes = if args.primes.is_empty() {
                None
            } else {
                Some(prime_set(&args.primes)?)
            };
            let budget = Budget::new(args.budget);
            let mut partial = false;
            let rows = numbers
                .iter()
                .map(|n| FactorRow::new(&factorize(n, budget), primes.as_ref()));
            emit(format, out, rows, |r| partial |= !r.summary.complete)?;
            Ok(partial)
        }
        Command::Trace(args) => {
            let n = integer(&args.n)?;
            if n.is_zero() {
                return usage("N must be positive");
            }
            if args.base < 2 {
                return usage("base must be at least 2");
            }
            let f = factorize(&n, Budget::new(args.budget));
            if !f.is_complete() {
                return Err(Failure::Budget(format!(
                    "{n} was not fully factored within the budget; raise --budget"
                )));
            }
            let report = trace(&n, args.base, &f)?;
            out.commit()?;
            match format {
                Format::Jsonl => {
                    let mut w = JsonlWriter::new(&mut *out)?;
                    w.write(&TraceOutput {
                        n: n.clone(),
                        base: args.base,
                        report: &report,
                    })?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(TRACE_CSV_HEADER).map_err(io::Error::from)?;
                    for line in trace_csv(&n, &report) {
                        w.write_record(line).map_err(io::Error::from)?;
                    }
                    w.flush()?;
                }
                Format::Text => writeln!(out, "{}", trace_text(&n, args.base, &report))?,
            }
            Ok(false)
        }
        Command::Bounds(cmd) => bounds(format, out, cmd),
        Command::Survey(cmd) => survey(format, cli.threads, out, cmd),
        Command::Cyclo(args) => {
            let report = cyclotomic_smooth(args.n, Budget::new(args.budget))?;
            let partial = !report.factorization.complete;
            emit(format, out, [report], |_| {})?;
            Ok(partial)
        }
        Command::Search(args) => {
            let primes = prime_set(&args.primes)?;
            let limit = integer(&args.limit)?;
            let hits = smooth_sparse_search(args.base, args.k, &primes, &limit, args.eps)?;
            emit(format, out, hits, |_| {})?;
            Ok(false)
        }
    }
}

fn numbered(values: impl Iterator<Item = BigUint>) -> impl Iterator<Item = EnumRow> {
    values.enumerate().map(|(i, value)| EnumRow {
        index: i + 1,
        value,
    })
}

fn enumerate(format: Format, out: &mut Buffered, args: &EnumArgs) -> Outcome {
    let max = args.max.as_deref().map(integer).transpose()?;
    if args.take.is_none() && max.is_none() {
        return usage("enum needs --take or --max to end the stream");
    }
    let take = args.take.unwrap_or(usize::MAX);
    let values: Box<dyn Iterator<Item = BigUint>> = match args.kind {
        StreamKind::Sparse => {
            let Some(base) = args.base else {
                return usage("a sparse stream needs --base");
            };
            let spec = match (args.k, &args.budget) {
                (Some(k), None) => SparseSpec::fixed(base, k)?,
                (None, Some(f)) => SparseSpec::with_budget(base, budget_spec(f)?)?,
                _ => return usage("give exactly one of --k and --f"),
            };
            match (args.budget.is_some(), max) {
                (false, None) => Box::new(sparse_sequence(&spec)?),
                (false, Some(m)) => Box::new(sparse_sequence_bounded(&spec, m)),
                (true, Some(m)) => Box::new(sparse_sequence_f(&spec, m)?),
                (true, None) => return usage("a digit-budget stream needs --max"),
            }
        }
        StreamKind::PowerSum => {
            let spec = PowerSumSpec::new(args.bases.clone(), args.shared_divisor)?;
            let seq = power_sum_sequence(&spec);
            match max {
                Some(m) => Box::new(seq.take_while(move |v| *v <= m)),
                None => Box::new(seq),
            }
        }
        StreamKind::Smooth => {
            let primes = prime_set(&args.primes)?;
            let Some(m) = max else {
                return usage("a smooth stream needs --max");
            };
            Box::new(smooth_sequence(&primes, m))
        }
    };
    emit(format, out, numbered(values.take(take)), |_| {})?;
    Ok(false)
}

fn linear_form(args: &LinearFormArgs) -> Result<(BoundInput, Option<BigRational>), Failure> {
    let rationals = args
        .rationals
        .iter()
        .map(|s| crate::parse::rational(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::Usage)?;
    let exponents = args.exponents.clone();
    let input = if args.heights.is_empty() && args.exponent_bound.is_none() {
        BoundInput::minimal(rationals, exponents)?
    } else {
        let minimal = BoundInput::minimal(rationals.clone(), exponents.clone())?;
        let heights = if args.heights.is_empty() {
            minimal.heights().to_vec()
        } else {
            args.heights.iter().map(|&h| Height::Value(h)).collect()
        };
        let b = args.exponent_bound.unwrap_or(minimal.exponent_bound());
        BoundInput::new(rationals, exponents, heights, b)?
    };
    let lambda = input.product().map(|p| p - BigRational::one());
    Ok((input, lambda))
}

fn bounds(format: Format, out: &mut Buffered, cmd: &BoundsCommand) -> Outcome {
    match cmd {
        BoundsCommand::Matveev(args) => {
            let (input, lambda) = linear_form(args)?;
            let bound = matveev_lower_bound(&input);
            let actual = lambda.as_ref().map(ln_abs_rational);
            let row = LinearFormRow {
                kind: "matveev",
                terms: input.n(),
                exponent_bound: input.exponent_bound(),
                bound,
                p: None,
                actual: actual.map(|a| a.mid()),
                holds: actual.map(|a| a.lo > bound),
            };
            emit(format, out, [row], |_| {})?;
        }
        BoundsCommand::Yu { form, p } => {
            let (input, lambda) = linear_form(form)?;
            let bound = yu_valuation_bound(&input, *p)?;
            let v = lambda
                .as_ref()
                .map(|l| p_adic_valuation(l, *p))
                .transpose()?;
            let row = LinearFormRow {
                kind: "yu",
                terms: input.n(),
                exponent_bound: input.exponent_bound(),
                bound,
                p: Some(*p),
                actual: v.map(|v| v as f64),
                holds: v.map(|v| (v as f64) < bound),
            };
            emit(format, out, [row], |_| {})?;
        }
        BoundsCommand::Thresholds(args) => return thresholds(format, out, args),
        BoundsCommand::Gap { base, k, primes } => {
            let primes = prime_set(primes)?;
            let row = GapRow {
                base: *base,
                k: *k,
                primes: primes.primes().to_vec(),
                constants: gap_constants(*base)?,
                top_exponent: top_exponent_bound(*base, *k, &primes)?,
            };
            emit(format, out, [row], |_| {})?;
        }
    }
    Ok(false)
}

fn thresholds(format: Format, out: &mut Buffered, args: &ThresholdArgs) -> Outcome {
    let n = integer(&args.n)?;
    if n.is_zero() {
        return usage("n must be positive");
    }
    if args.base < 2 {
        return usage("base must be at least 2");
    }
    let eps = args.eps;
    let sparse_gpf = if args.k >= 3 {
        sparse_gpf_threshold(&n, args.k, eps)?
    } else {
        Threshold::NotApplicable
    };
    let power_sum_gpf = if args.k >= 2 {
        power_sum_gpf_threshold(&n, args.k, eps)?
    } else {
        return usage("k must be at least 2");
    };
    let budget_gpf = match &args.budget {
        Some(f) => {
            let budget = budget_spec(f)?;
            let Some(d0) = args.delta0.or(budget.delta0()) else {
                return usage(format!(
                    "budget '{f}' has no closed-form delta0; pass --delta0"
                ));
            };
            budget_gpf_threshold(&n, budget.eval(&n), d0, eps)?
        }
        None => Threshold::NotApplicable,
    };
    let cyclotomic = match &args.greatest_prime {
        Some(p) => cyclotomic_c_min(&n, &integer(p)?),
        None => Threshold::NotApplicable,
    };
    let nz = nz_count(&n, args.base);
    let smooth_digit = match smooth_digit_check(&n, nz) {
        Ok(rows) => rows,
        Err(smoothdigits::Error::IncompleteFactorization(_)) => {
            return usage("smoothness of n could not be decided within the factoring budget")
        }
        Err(e) => return Err(e.into()),
    };
    let row = ThresholdRow {
        s_unit_digits: s_unit_digit_threshold(&n, eps)?,
        n,
        k: args.k,
        epsilon: eps,
        sparse_gpf,
        power_sum_gpf,
        budget: args.budget.clone(),
        budget_gpf,
        cyclotomic_c_min: cyclotomic,
        base: args.base,
        nz,
        smooth_digit,
    };
    emit(format, out, [row], |_| {})?;
    Ok(false)
}

fn survey(
    format: Format,
    threads: Option<usize>,
    out: &mut Buffered,
    cmd: &SurveyCommand,
) -> Outcome {
    match cmd {
        SurveyCommand::Sparse {
            base,
            k,
            budget,
            count,
            max,
            effort,
            eps,
            delta0,
            windows,
        } => {
            let spec = match (k, budget) {
                (Some(k), None) => SparseSpec::fixed(*base, *k)?,
                (None, Some(f)) => SparseSpec::with_budget(*base, budget_spec(f)?)?,
                _ => return usage("give exactly one of --k and --f"),
            };
            let mut config = SurveyConfig::new(spec, *count);
            config.budget = Budget::new(*effort);
            config.params = ThresholdParams {
                epsilon: *eps,
                delta0: *delta0,
                ..ThresholdParams::default()
            };
            config.max_value = max.as_deref().map(integer).transpose()?;
            config.threads = threads;
            let records = sparse_survey(config)?;
            let mut partial = false;
            if *windows {
                let mut agg = WindowAggregator::new();
                let mut done = Vec::new();
                for r in records {
                    partial |= !r.factorization.complete;
                    done.extend(agg.push(&r));
                }
                done.extend(agg.finish());
                emit(format, out, done, |_| {})?;
            } else {
                emit(format, out, records, |r| {
                    partial |= !r.factorization.complete
                })?;
            }
            Ok(partial)
        }
        SurveyCommand::Stewart { a, base, from, to } => {
            let rows = stewart_survey(*a, *base, *from..=*to)?;
            emit(format, out, rows, |_| {})?;
            Ok(false)
        }
    }
}
