//! Surveys of sparse sequences: each term is factored, compared against the
//! threshold functions and traced through the two-branch argument.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::output::{
    opt_field, pairs_field, serialize_big, serialize_big_opt, threshold_field, Row,
};
use super::FactorSummary;
use crate::bounds::{
    budget_gpf_threshold, digit_prime_gap, gap_constants, s_unit_digit_threshold,
    sparse_gpf_threshold, trace, Branch, GapConstants, GapReport, Threshold, ThresholdParams,
    TraceReport,
};
use crate::digits::{decompose, DigitExpansion};
use crate::enumerate::{
    sparse_sequence, sparse_sequence_f, DigitBound, SparseSequence, SparseSpec,
};
use crate::error::{Error, Result};
use crate::factor::{factorize, Budget};

/// Terms handed to the worker pool at a time.
const CHUNK: usize = 64;

#[derive(Clone, Debug)]
pub struct SurveyConfig {
    pub spec: SparseSpec,
    /// Number of terms `J`.
    pub count: usize,
    pub budget: Budget,
    pub params: ThresholdParams,
    /// Required for digit-budget specs.
    pub max_value: Option<BigUint>,
    /// Worker threads; the available parallelism when absent.
    pub threads: Option<usize>,
}

impl SurveyConfig {
    pub fn new(spec: SparseSpec, count: usize) -> Self {
        SurveyConfig {
            spec,
            count,
            budget: Budget::default(),
            params: ThresholdParams::default(),
            max_value: None,
            threads: None,
        }
    }
}

/// A threshold and whether the surveyed quantity exceeds it; `exceeds` is
/// absent when either side is unknown.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub threshold: Threshold,
    pub exceeds: Option<bool>,
}

impl Comparison {
    fn new(threshold: Threshold, quantity: Option<f64>) -> Self {
        let exceeds = match (threshold.value(), quantity) {
            (Some(t), Some(q)) => Some(q > t),
            _ => None,
        };
        Comparison { threshold, exceeds }
    }

    fn not_applicable() -> Self {
        Comparison {
            threshold: Threshold::NotApplicable,
            exceeds: None,
        }
    }
}

/// Thresholds for one term. `sparse_gpf` and `budget_gpf` compare `P`,
/// `s_unit_digits` compares the nonzero-digit count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurveyThresholds {
    pub sparse_gpf: Comparison,
    pub s_unit_digits: Comparison,
    pub budget_gpf: Comparison,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyRecord {
    /// `j`, starting at 1.
    pub index: usize,
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
    /// `[exponent, digit]` pairs, lowest exponent first.
    pub digits: Vec<(u64, u64)>,
    pub nz: usize,
    pub factorization: FactorSummary,
    pub thresholds: SurveyThresholds,
    /// Present for fully factored terms with at least two nonzero digits.
    pub trace: Option<TraceReport>,
    /// Present when the trace is, and the term is at least 16.
    pub gap: Option<GapReport>,
}

impl SurveyRecord {
    pub fn expansion(&self, base: u64) -> DigitExpansion {
        decompose(&self.value, base).expect("surveyed values are positive")
    }

    /// Whether every traced inequality the argument guarantees holds.
    pub fn trace_holds(&self) -> Option<bool> {
        self.trace.as_ref().map(TraceReport::all_required_hold)
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Archimedean => "archimedean",
        Branch::PAdic => "p_adic",
    }
}

impl Row for SurveyRecord {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "index",
            "value",
            "nz",
            "digits",
            "complete",
            "factors",
            "cofactor",
            "P",
            "omega",
            "Q",
            "sparse_gpf",
            "sparse_gpf_exceeds",
            "s_unit_digits",
            "s_unit_digits_exceeds",
            "budget_gpf",
            "budget_gpf_exceeds",
            "branch",
            "ell",
            "p",
            "valuation",
            "size_condition",
            "trace_holds",
            "gap_lhs",
            "gap_rhs",
            "gap",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        let f = &self.factorization;
        let t = &self.thresholds;
        let digits = self
            .digits
            .iter()
            .map(|(e, d)| format!("{e}:{d}"))
            .collect::<Vec<_>>()
            .join(";");
        let tr = self.trace.as_ref();
        vec![
            self.index.to_string(),
            self.value.to_string(),
            self.nz.to_string(),
            digits,
            f.complete.to_string(),
            pairs_field(&f.factors),
            opt_field(&f.cofactor),
            opt_field(&f.greatest_prime),
            opt_field(&f.omega),
            opt_field(&f.radical),
            threshold_field(&t.sparse_gpf.threshold),
            opt_field(&t.sparse_gpf.exceeds),
            threshold_field(&t.s_unit_digits.threshold),
            opt_field(&t.s_unit_digits.exceeds),
            threshold_field(&t.budget_gpf.threshold),
            opt_field(&t.budget_gpf.exceeds),
            tr.map(|r| branch_name(r.branch).to_string())
                .unwrap_or_default(),
            opt_field(&tr.and_then(|r| r.ell)),
            opt_field(&tr.and_then(|r| r.p)),
            opt_field(&tr.and_then(|r| r.valuation)),
            opt_field(&tr.map(|r| r.size_condition)),
            opt_field(&self.trace_holds()),
            opt_field(&self.gap.map(|g| g.lhs)),
            opt_field(&self.gap.map(|g| g.rhs)),
            opt_field(&self.gap.map(|g| g.gap)),
        ]
    }

    fn text(&self) -> String {
        let f = &self.factorization;
        let mut line = format!("j={} u={} nz={} ", self.index, self.value, self.nz);
        match &f.greatest_prime {
            Some(p) => line.push_str(&format!("P={p} omega={}", opt_field(&f.omega))),
            None => line.push_str("P=? (partial)"),
        }
        if let Some(t) = &self.trace {
            line.push_str(&format!(
                " branch={} holds={}",
                branch_name(t.branch),
                t.all_required_hold()
            ));
        }
        if let Some(g) = &self.gap {
            line.push_str(&format!(" gap={:.4}", g.gap));
        }
        line
    }
}

/// Per-term settings shared by the workers.
struct Context {
    base: u64,
    bound: DigitBound,
    budget: Budget,
    params: ThresholdParams,
    gap: GapConstants,
}

fn survey_record(index: usize, value: BigUint, ctx: &Context) -> SurveyRecord {
    let e = decompose(&value, ctx.base).expect("surveyed values are positive");
    let nz = e.len();
    let f = factorize(&value, ctx.budget);
    let summary = FactorSummary::of(&f);
    let p = summary.greatest_prime.as_ref().and_then(|p| p.to_f64());
    let eps = ctx.params.epsilon;

    let sparse_gpf = match &ctx.bound {
        DigitBound::Fixed(k) if *k >= 3 => Comparison::new(
            sparse_gpf_threshold(&value, *k, eps).expect("validated parameters"),
            p,
        ),
        _ => Comparison::not_applicable(),
    };
    let s_unit_digits = Comparison::new(
        s_unit_digit_threshold(&value, eps).expect("validated parameters"),
        Some(nz as f64),
    );
    let budget_gpf = match &ctx.bound {
        DigitBound::Function(budget) => match ctx.params.delta0.or(budget.delta0()) {
            // a custom budget may be nonpositive at small n, where psi is undefined
            Some(d0) => Comparison::new(
                budget_gpf_threshold(&value, budget.eval(&value), d0, eps)
                    .unwrap_or(Threshold::NotApplicable),
                p,
            ),
            None => Comparison::not_applicable(),
        },
        DigitBound::Fixed(_) => Comparison::not_applicable(),
    };

    let traced = (f.is_complete() && nz >= 2)
        .then(|| trace(&value, ctx.base, &f).ok())
        .flatten();
    let gap = match (&traced, &summary.greatest_prime, summary.omega) {
        (Some(_), Some(gp), Some(omega)) => digit_prime_gap(&value, nz, gp, omega, ctx.gap).ok(),
        _ => None,
    };
    SurveyRecord {
        index,
        digits: e.terms().iter().map(|t| (t.exponent, t.digit)).collect(),
        value,
        nz,
        factorization: summary,
        thresholds: SurveyThresholds {
            sparse_gpf,
            s_unit_digits,
            budget_gpf,
        },
        trace: traced,
        gap,
    }
}

/// The survey stream. Terms are processed in parallel chunks and emitted in
/// index order.
pub struct SparseSurvey {
    terms: SparseSequence,
    ctx: Context,
    next_index: usize,
    remaining: usize,
    ready: VecDeque<SurveyRecord>,
    pool: rayon::ThreadPool,
}

impl Iterator for SparseSurvey {
    type Item = SurveyRecord;

    fn next(&mut self) -> Option<SurveyRecord> {
        if self.ready.is_empty() && self.remaining > 0 {
            let take = self.remaining.min(CHUNK);
            let batch: Vec<(usize, BigUint)> = (&mut self.terms)
                .take(take)
                .enumerate()
                .map(|(i, v)| (self.next_index + i, v))
                .collect();
            // a finite stream ends the survey early
            self.remaining = if batch.len() < take {
                0
            } else {
                self.remaining - take
            };
            self.next_index += batch.len();
            let ctx = &self.ctx;
            let records: Vec<SurveyRecord> = self.pool.install(|| {
                batch
                    .into_par_iter()
                    .map(|(j, v)| survey_record(j, v, ctx))
                    .collect()
            });
            self.ready.extend(records);
        }
        self.ready.pop_front()
    }
}

/// Surveys the first `J` terms of a sparse sequence. Factoring failures are
/// recorded in the record, never dropped.
pub fn sparse_survey(config: SurveyConfig) -> Result<SparseSurvey> {
    if config.count == 0 {
        return Err(Error::domain("a survey needs J >= 1"));
    }
    config.params.validate()?;
    let base = config.spec.base();
    let terms = match (config.spec.bound(), config.max_value.clone()) {
        (DigitBound::Fixed(_), None) => sparse_sequence(&config.spec)?,
        (DigitBound::Fixed(_), Some(m)) => {
            crate::enumerate::sparse_sequence_bounded(&config.spec, m)
        }
        (DigitBound::Function(_), Some(m)) => sparse_sequence_f(&config.spec, m)?,
        (DigitBound::Function(_), None) => {
            return Err(Error::domain("a digit-budget survey needs a value limit"))
        }
    };
    if config.threads == Some(0) {
        return Err(Error::domain("a survey needs at least one thread"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::domain(format!("cannot start workers: {e}")))?;
    let gap = match config.params.gap {
        Some(g) => g,
        None => gap_constants(base)?,
    };
    Ok(SparseSurvey {
        terms,
        ctx: Context {
            base,
            bound: config.spec.bound().clone(),
            budget: config.budget,
            params: config.params,
            gap,
        },
        next_index: 1,
        remaining: config.count,
        ready: VecDeque::new(),
        pool,
    })
}

/// Smallest `P` among the terms with `j` in `[2^t, 2^(t+1))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowMinimum {
    pub t: u32,
    pub first_index: usize,
    pub last_index: usize,
    pub terms: usize,
    pub factored: usize,
    #[serde(rename = "min_P", serialize_with = "serialize_big_opt")]
    pub min_greatest_prime: Option<BigUint>,
    /// Index of the first term attaining the minimum.
    pub argmin: Option<usize>,
}

impl Row for WindowMinimum {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "t",
            "first_index",
            "last_index",
            "terms",
            "factored",
            "min_P",
            "argmin",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.t.to_string(),
            self.first_index.to_string(),
            self.last_index.to_string(),
            self.terms.to_string(),
            self.factored.to_string(),
            opt_field(&self.min_greatest_prime),
            opt_field(&self.argmin),
        ]
    }

    fn text(&self) -> String {
        format!(
            "j in [{}, {}]: {}/{} factored, min P = {}{}",
            self.first_index,
            self.last_index,
            self.factored,
            self.terms,
            self.min_greatest_prime
                .as_ref()
                .map_or("?".to_string(), ToString::to_string),
            self.argmin.map_or(String::new(), |j| format!(" at j={j}")),
        )
    }
}

fn window_of(j: usize) -> u32 {
    usize::BITS - 1 - j.leading_zeros()
}

/// Folds records, in index order, into dyadic window minima.
#[derive(Debug, Default)]
pub struct WindowAggregator {
    current: Option<WindowMinimum>,
}

impl WindowAggregator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a record; returns the previous window once a record starts a new one.
    pub fn push(&mut self, r: &SurveyRecord) -> Option<WindowMinimum> {
        let t = window_of(r.index);
        let finished = match &self.current {
            Some(w) if w.t != t => self.current.take(),
            _ => None,
        };
        let w = self.current.get_or_insert(WindowMinimum {
            t,
            first_index: r.index,
            last_index: r.index,
            terms: 0,
            factored: 0,
            min_greatest_prime: None,
            argmin: None,
        });
        w.last_index = r.index;
        w.terms += 1;
        if let Some(p) = &r.factorization.greatest_prime {
            w.factored += 1;
            if w.min_greatest_prime.as_ref().is_none_or(|m| p < m) {
                w.min_greatest_prime = Some(p.clone());
                w.argmin = Some(r.index);
            }
        }
        finished
    }

    pub fn finish(self) -> Option<WindowMinimum> {
        self.current
    }
}

pub fn window_minima(records: &[SurveyRecord]) -> Vec<WindowMinimum> {
    let mut agg = WindowAggregator::new();
    let mut out: Vec<_> = records.iter().filter_map(|r| agg.push(r)).collect();
    out.extend(agg.finish());
    out
}
