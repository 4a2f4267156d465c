//! Ordered generation of sparse integers, power sums and smooth numbers.
//!
//! Sparse streams work in rounds on the top exponent `m`: every integer with
//! top exponent `m` lies in `[b^m, b^(m+1))`, so sorting one round and
//! concatenating rounds gives the global order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::digits::nz_count;
use crate::error::{Error, Result};
use crate::factor::PrimeSet;
use crate::numeric::Magnitude;

type BudgetFn = dyn Fn(&BigUint) -> f64 + Send + Sync;

/// A digit budget `f`: an integer `n` is admitted when `nz_count(n) <= f(n)`.
#[derive(Clone)]
pub struct DigitBudget {
    f: Arc<BudgetFn>,
    monotone: bool,
    cap: Option<u32>,
    label: String,
    delta0: Option<f64>,
}

impl fmt::Debug for DigitBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitBudget")
            .field("label", &self.label)
            .field("monotone", &self.monotone)
            .field("cap", &self.cap)
            .field("delta0", &self.delta0)
            .finish()
    }
}

/// `log log max(n, 16)`, always at least `log log 16 > 1`.
fn loglog16(n: &BigUint) -> f64 {
    let ln = Magnitude::of_big(n).ln().max(16f64.ln());
    ln.ln()
}

/// `(log log n, log log log n, log log log log n)` with `n` clamped to
/// `e^(e^e)` so every level is at least zero.
fn log_levels(n: &BigUint) -> (f64, f64, f64) {
    let ln = Magnitude::of_big(n).ln().max(std::f64::consts::E.exp());
    let ll = ln.ln();
    let lll = ll.ln();
    (ll, lll, lll.ln())
}

impl DigitBudget {
    /// A caller-supplied budget. Non-monotone budgets need `cap`, the largest
    /// digit count ever admitted, so each round can be generated finitely.
    pub fn custom<F>(
        label: impl Into<String>,
        f: F,
        monotone: bool,
        cap: Option<u32>,
    ) -> Result<Self>
    where
        F: Fn(&BigUint) -> f64 + Send + Sync + 'static,
    {
        if !monotone && cap.is_none() {
            return Err(Error::domain("a non-monotone digit budget needs a cap"));
        }
        Ok(DigitBudget {
            f: Arc::new(f),
            monotone,
            cap,
            label: label.into(),
            delta0: None,
        })
    }

    /// `f(n) = c` with `c >= 1`.
    pub fn constant(c: f64) -> Result<Self> {
        check_coefficient(c, 1.0)?;
        let mut budget = Self::custom(format!("const:{c}"), move |_| c, true, None)?;
        budget.delta0 = Some(1.0);
        Ok(budget)
    }

    /// `f(n) = max(1, c log log max(n, 16))`. Grows faster than the
    /// `log log / log log log` ceiling, so it has no `delta0`.
    pub fn loglog(c: f64) -> Result<Self> {
        check_coefficient(c, 0.0)?;
        Self::custom(
            format!("loglog:{c}"),
            move |n| (c * loglog16(n)).max(1.0),
            true,
            None,
        )
    }

    /// `f(n) = max(1, c log log n / log log log n)`, with `delta0 = 1 - c`
    /// when `c < 1`.
    pub fn loglog_ratio(c: f64) -> Result<Self> {
        check_coefficient(c, 0.0)?;
        // The ratio decreases below n = e^(e^e); it is flat there after clamping.
        let mut budget = Self::custom(
            format!("loglog-ratio:{c}"),
            move |n| {
                let (ll, lll, _) = log_levels(n);
                (c * ll / lll).max(1.0)
            },
            true,
            None,
        )?;
        budget.delta0 = (c < 1.0).then_some(1.0 - c);
        Ok(budget)
    }

    /// `f(n) = max(1, c sqrt(log log n log log log n / log log log log n))`,
    /// evaluated with `n >= e^(e^(e^e))` so the innermost log is positive.
    /// It is `o(log log / log log log)`, so `delta0 = 1`.
    pub fn sqrt(c: f64) -> Result<Self> {
        check_coefficient(c, 0.0)?;
        let floor = std::f64::consts::E.exp().exp();
        let mut budget = Self::custom(
            format!("sqrt:{c}"),
            move |n| {
                let ln = Magnitude::of_big(n).ln().max(floor);
                let ll = ln.ln();
                let lll = ll.ln();
                (c * (ll * lll / lll.ln()).sqrt()).max(1.0)
            },
            false,
            Some(64),
        )?;
        budget.delta0 = Some(1.0);
        Ok(budget)
    }

    /// Replaces the cap on admitted digit counts.
    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = Some(cap);
        self
    }

    /// Overrides the `delta0` used by the budget threshold.
    pub fn with_delta0(mut self, delta0: f64) -> Self {
        self.delta0 = Some(delta0);
        self
    }

    pub fn eval(&self, n: &BigUint) -> f64 {
        (self.f)(n)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn delta0(&self) -> Option<f64> {
        self.delta0
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }
}

fn check_coefficient(c: f64, min: f64) -> Result<()> {
    if !c.is_finite() || c < min || (min == 0.0 && c == 0.0) {
        return Err(Error::domain(format!("coefficient {c} out of range")));
    }
    Ok(())
}

/// Parses `family:coefficient` with family one of `const`, `loglog`,
/// `loglog-ratio`, `sqrt`.
impl FromStr for DigitBudget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, value) = s
            .split_once(':')
            .ok_or_else(|| Error::domain(format!("digit budget '{s}' is not family:value")))?;
        let c: f64 = value
            .parse()
            .map_err(|_| Error::domain(format!("bad coefficient '{value}'")))?;
        match family {
            "const" => DigitBudget::constant(c),
            "loglog" => DigitBudget::loglog(c),
            "loglog-ratio" => DigitBudget::loglog_ratio(c),
            "sqrt" => DigitBudget::sqrt(c),
            other => Err(Error::domain(format!(
                "unknown digit budget family '{other}'"
            ))),
        }
    }
}

/// Either a fixed bound `k >= 2` on nonzero digits or a budget function.
#[derive(Clone, Debug)]
pub enum DigitBound {
    Fixed(u32),
    Function(DigitBudget),
}

#[derive(Clone, Debug)]
pub struct SparseSpec {
    base: u64,
    bound: DigitBound,
}

impl SparseSpec {
    pub fn fixed(base: u64, k: u32) -> Result<Self> {
        check_base(base)?;
        if k < 2 {
            return Err(Error::domain(format!("k must be at least 2, got {k}")));
        }
        Ok(SparseSpec {
            base,
            bound: DigitBound::Fixed(k),
        })
    }

    pub fn with_budget(base: u64, budget: DigitBudget) -> Result<Self> {
        check_base(base)?;
        Ok(SparseSpec {
            base,
            bound: DigitBound::Function(budget),
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn bound(&self) -> &DigitBound {
        &self.bound
    }
}

fn check_base(b: u64) -> Result<()> {
    if b < 2 {
        return Err(Error::domain(format!("base must be at least 2, got {b}")));
    }
    Ok(())
}

/// Every integer not divisible by `b` whose top exponent is `m` and which
/// has at most `max_terms` nonzero digits, unsorted.
fn round_candidates(b: u64, m: u64, max_terms: u64) -> Vec<BigUint> {
    let base = BigUint::from(b);
    if m == 0 {
        return (1..b).map(BigUint::from).collect();
    }
    if max_terms < 2 {
        return Vec::new();
    }
    let top = base.pow(m as u32);
    // partial sums over positions 0 and m, then middle positions chosen in
    // increasing order
    let mut ends = Vec::with_capacity(((b - 1) * (b - 1)) as usize);
    for lead in 1..b {
        for low in 1..b {
            ends.push(&top * lead + low);
        }
    }
    let extra = (max_terms - 2).min(m - 1);
    if extra == 0 {
        return ends;
    }
    let powers: Vec<BigUint> = (0..m).map(|e| base.pow(e as u32)).collect();
    let mut out = Vec::new();
    fn extend(
        acc: &BigUint,
        from: u64,
        m: u64,
        left: u64,
        b: u64,
        powers: &[BigUint],
        out: &mut Vec<BigUint>,
    ) {
        out.push(acc.clone());
        if left == 0 {
            return;
        }
        for pos in from..m {
            for d in 1..b {
                let next = acc + &powers[pos as usize] * d;
                extend(&next, pos + 1, m, left - 1, b, powers, out);
            }
        }
    }
    for end in &ends {
        extend(end, 1, m, extra, b, &powers, &mut out);
    }
    out
}

/// The ordered stream `u_1 < u_2 < ...` for a [`SparseSpec`].
///
/// A stream may have a finite tail (e.g. `f = 1`), so it stops at the first
/// round whose lower edge `b^m` exceeds `max_value` when one is set. Budget
/// streams require a value limit.
#[derive(Debug)]
pub struct SparseSequence {
    spec: SparseSpec,
    round: u64,
    buffer: std::vec::IntoIter<BigUint>,
    max_value: Option<BigUint>,
    round_floor: BigUint,
    done: bool,
}

impl SparseSequence {
    fn new(spec: SparseSpec, max_value: Option<BigUint>) -> Self {
        SparseSequence {
            spec,
            round: 0,
            buffer: Vec::new().into_iter(),
            max_value,
            round_floor: BigUint::one(),
            done: false,
        }
    }

    fn round_limit(&self, m: u64) -> u64 {
        match &self.spec.bound {
            DigitBound::Fixed(k) => *k as u64,
            DigitBound::Function(budget) => {
                let hard = budget.cap.map_or(m + 1, |c| (c as u64).min(m + 1));
                if budget.monotone {
                    // sup of f over the round is attained at its top
                    let top = &self.round_floor * self.spec.base - 1u32;
                    let sup = budget.eval(&top).ceil();
                    (if sup.is_finite() && sup >= 0.0 {
                        sup as u64
                    } else {
                        hard
                    })
                    .min(hard)
                } else {
                    hard
                }
            }
        }
    }

    fn fill(&mut self) {
        let m = self.round;
        let b = self.spec.base;
        let mut values = round_candidates(b, m, self.round_limit(m));
        if let DigitBound::Function(budget) = &self.spec.bound {
            values.retain(|n| nz_count(n, b) as f64 <= budget.eval(n));
        }
        if let Some(limit) = &self.max_value {
            values.retain(|n| n <= limit);
        }
        values.sort_unstable();
        self.buffer = values.into_iter();
        self.round += 1;
        self.round_floor *= b;
    }
}

impl Iterator for SparseSequence {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        loop {
            if let Some(v) = self.buffer.next() {
                return Some(v);
            }
            if self.done {
                return None;
            }
            if let Some(limit) = &self.max_value {
                if &self.round_floor > limit {
                    self.done = true;
                    return None;
                }
            }
            self.fill();
        }
    }
}

/// `u_j^(k)`: integers not divisible by `b` with at most `k` nonzero digits,
/// increasing, without end.
pub fn sparse_sequence(spec: &SparseSpec) -> Result<SparseSequence> {
    match spec.bound {
        DigitBound::Fixed(_) => Ok(SparseSequence::new(spec.clone(), None)),
        DigitBound::Function(_) => Err(Error::domain(
            "a digit-budget spec needs sparse_sequence_f with a value limit",
        )),
    }
}

/// [`sparse_sequence`] cut off at `max_value`.
pub fn sparse_sequence_bounded(spec: &SparseSpec, max_value: BigUint) -> SparseSequence {
    SparseSequence::new(spec.clone(), Some(max_value))
}

/// `u_j^(f)`: integers `n` not divisible by `b` with `nz_count(n) <= f(n)`,
/// increasing and no larger than `max_value`.
pub fn sparse_sequence_f(spec: &SparseSpec, max_value: BigUint) -> Result<SparseSequence> {
    match spec.bound {
        DigitBound::Function(_) => Ok(SparseSequence::new(spec.clone(), Some(max_value))),
        DigitBound::Fixed(_) => Err(Error::domain("sparse_sequence_f needs a digit budget")),
    }
}

/// Bases for `a_1^(n_1) + ... + a_k^(n_k) + 1` with every `n_i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumSpec {
    bases: Vec<u64>,
}

impl PowerSumSpec {
    /// With `shared_divisor_check` the bases must have a common divisor
    /// `>= 2`.
    pub fn new(bases: Vec<u64>, shared_divisor_check: bool) -> Result<Self> {
        if bases.len() < 2 {
            return Err(Error::domain("a power sum needs at least two bases"));
        }
        if bases.contains(&0) {
            return Err(Error::domain("power-sum bases must be positive"));
        }
        if shared_divisor_check {
            let g = bases.iter().fold(0u64, |g, &a| g.gcd(&a));
            if g < 2 {
                return Err(Error::domain(format!(
                    "bases {bases:?} have no common divisor >= 2"
                )));
            }
        }
        Ok(PowerSumSpec { bases })
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    pub fn gcd(&self) -> u64 {
        self.bases.iter().fold(0u64, |g, &a| g.gcd(&a))
    }
}

/// Distinct power-sum values in increasing order.
///
/// A heap holds exponent tuples keyed by value. Each tuple is pushed by a
/// single parent, the tuple with its last coordinate above 1 decremented, so
/// the heap never holds duplicates of a tuple; equal values from different
/// tuples pop consecutively and are emitted once.
#[derive(Debug)]
pub struct PowerSumSequence {
    bases: Vec<BigUint>,
    variable: Vec<bool>,
    heap: BinaryHeap<Reverse<(BigUint, Vec<u32>)>>,
    last: Option<BigUint>,
}

impl PowerSumSequence {
    fn value(&self, exps: &[u32]) -> BigUint {
        self.bases
            .iter()
            .zip(exps)
            .map(|(a, &e)| a.pow(e))
            .sum::<BigUint>()
            + 1u32
    }
}

impl Iterator for PowerSumSequence {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        loop {
            let Reverse((value, exps)) = self.heap.pop()?;
            let last_raised = exps.iter().rposition(|&e| e > 1).unwrap_or(0);
            for i in last_raised..exps.len() {
                if !self.variable[i] {
                    continue;
                }
                let mut child = exps.clone();
                child[i] += 1;
                let v = self.value(&child);
                self.heap.push(Reverse((v, child)));
            }
            if self.last.as_ref() != Some(&value) {
                self.last = Some(value.clone());
                return Some(value);
            }
        }
    }
}

pub fn power_sum_sequence(spec: &PowerSumSpec) -> PowerSumSequence {
    let bases: Vec<BigUint> = spec.bases.iter().map(|&a| BigUint::from(a)).collect();
    // a base of 1 contributes 1 whatever its exponent; keep it at 1
    let variable = spec.bases.iter().map(|&a| a >= 2).collect();
    let mut seq = PowerSumSequence {
        bases,
        variable,
        heap: BinaryHeap::new(),
        last: None,
    };
    let start = vec![1u32; spec.bases.len()];
    let v = seq.value(&start);
    seq.heap.push(Reverse((v, start)));
    seq
}

/// Products of powers of a prime set up to a limit, increasing.
///
/// Each product is reached from the one with its largest prime removed, so a
/// node with largest prime index `i` only spawns multiples by primes `>= q_i`.
#[derive(Debug)]
pub struct SmoothSequence {
    primes: Vec<BigUint>,
    limit: BigUint,
    heap: BinaryHeap<Reverse<(BigUint, usize)>>,
}

impl Iterator for SmoothSequence {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let Reverse((value, idx)) = self.heap.pop()?;
        for (i, q) in self.primes.iter().enumerate().skip(idx) {
            let next = &value * q;
            if next <= self.limit {
                self.heap.push(Reverse((next, i)));
            }
        }
        Some(value)
    }
}

/// All `S`-units up to `limit`, including 1, increasing.
pub fn smooth_sequence(primes: &PrimeSet, limit: BigUint) -> SmoothSequence {
    let mut heap = BinaryHeap::new();
    if !limit.is_zero() {
        heap.push(Reverse((BigUint::one(), 0)));
    }
    SmoothSequence {
        primes: primes.primes().iter().map(|&p| BigUint::from(p)).collect(),
        limit,
        heap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn take_u64(it: impl Iterator<Item = BigUint>, n: usize) -> Vec<u64> {
        it.take(n).map(|v| v.to_u64().unwrap()).collect()
    }

    #[test]
    fn fixed_sparse_examples() {
        let s = SparseSpec::fixed(2, 2).unwrap();
        assert_eq!(
            take_u64(sparse_sequence(&s).unwrap(), 6),
            vec![1, 3, 5, 9, 17, 33]
        );
        let s = SparseSpec::fixed(10, 2).unwrap();
        assert_eq!(take_u64(sparse_sequence(&s).unwrap(), 10)[9], 11);
        assert!(SparseSpec::fixed(2, 1).is_err());
        assert!(SparseSpec::fixed(1, 2).is_err());
    }

    #[test]
    fn budget_examples() {
        let s = SparseSpec::with_budget(2, DigitBudget::constant(2.0).unwrap()).unwrap();
        let seq = sparse_sequence_f(&s, BigUint::from(1000u32)).unwrap();
        assert_eq!(take_u64(seq, 6), vec![1, 3, 5, 9, 17, 33]);

        let s = SparseSpec::with_budget(10, DigitBudget::constant(1.0).unwrap()).unwrap();
        let all: Vec<u64> = take_u64(
            sparse_sequence_f(&s, BigUint::from(10u64).pow(30)).unwrap(),
            100,
        );
        assert_eq!(all, (1..=9).collect::<Vec<_>>());
    }

    #[test]
    fn custom_budget_membership() {
        let f = |n: &BigUint| loglog16(n).floor() + 1.0;
        let budget = DigitBudget::custom("floor", f, true, None).unwrap();
        let s = SparseSpec::with_budget(2, budget.clone()).unwrap();
        let terms = take_u64(sparse_sequence_f(&s, BigUint::from(64u32)).unwrap(), 100);
        let three = BigUint::from(3u32);
        assert_eq!(terms.contains(&3), 2.0 <= budget.eval(&three));
        assert!(DigitBudget::custom("x", f, false, None).is_err());
    }

    #[test]
    fn budget_parsing() {
        assert_eq!("const:3".parse::<DigitBudget>().unwrap().label(), "const:3");
        assert_eq!(
            "loglog-ratio:0.5".parse::<DigitBudget>().unwrap().delta0(),
            Some(0.5)
        );
        assert_eq!("loglog:1".parse::<DigitBudget>().unwrap().delta0(), None);
        assert!("const:0.5".parse::<DigitBudget>().is_err());
        assert!("cube:1".parse::<DigitBudget>().is_err());
        assert!("const".parse::<DigitBudget>().is_err());
    }

    #[test]
    fn power_sum_examples() {
        let s = PowerSumSpec::new(vec![2, 2], true).unwrap();
        assert_eq!(take_u64(power_sum_sequence(&s), 4), vec![5, 7, 9, 11]);
        let s = PowerSumSpec::new(vec![2, 4], true).unwrap();
        assert_eq!(take_u64(power_sum_sequence(&s), 1), vec![7]);
        assert!(PowerSumSpec::new(vec![2, 3], true).is_err());
        assert!(PowerSumSpec::new(vec![2, 3], false).is_ok());
        let s = PowerSumSpec::new(vec![1, 1], false).unwrap();
        assert_eq!(take_u64(power_sum_sequence(&s), 5), vec![3]);
    }

    #[test]
    fn smooth_examples() {
        let s = PrimeSet::new(vec![2, 3, 5]).unwrap();
        assert_eq!(
            take_u64(smooth_sequence(&s, BigUint::from(12u32)), 100),
            vec![1, 2, 3, 4, 5, 6, 8, 9, 10, 12]
        );
        let s = PrimeSet::new(vec![2]).unwrap();
        assert_eq!(
            take_u64(smooth_sequence(&s, BigUint::from(16u32)), 100),
            vec![1, 2, 4, 8, 16]
        );
        let s = PrimeSet::new(vec![3, 5]).unwrap();
        assert_eq!(
            take_u64(smooth_sequence(&s, BigUint::from(15u32)), 100),
            vec![1, 3, 5, 9, 15]
        );
    }
}
