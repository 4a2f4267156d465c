//! Threshold functions built from iterated logarithms.
//!
//! Each is a partial function: when one of the logarithms it needs is not
//! positive the result is [`Threshold::NotApplicable`], so no NaN or infinity
//! ever leaves this module.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factor::is_smooth;
use crate::numeric::Magnitude;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    Value(f64),
    NotApplicable,
}

impl Threshold {
    fn from_value(v: f64) -> Threshold {
        if v.is_finite() {
            Threshold::Value(v)
        } else {
            Threshold::NotApplicable
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Threshold::Value(v) => Some(*v),
            Threshold::NotApplicable => None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self, Threshold::Value(_))
    }

    /// A nonpositive value, which any positive quantity trivially exceeds.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Threshold::Value(v) if *v <= 0.0)
    }
}

/// Serialized as the number, or `null` when not applicable.
impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threshold::Value(v) => s.serialize_f64(*v),
            Threshold::NotApplicable => s.serialize_none(),
        }
    }
}

/// `log u, log log u, ...` to `depth` levels, all positive.
fn logs(u: impl Into<Magnitude>, depth: usize) -> Option<Vec<f64>> {
    u.into().iterated_logs(depth)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::domain(format!(
            "epsilon must be a nonnegative real, got {eps}"
        )));
    }
    Ok(())
}

/// `(c - eps) log log u * log log log u / log log log log u`.
fn iterated_ratio(u: Magnitude, c: f64, eps: f64) -> Threshold {
    match logs(u, 4) {
        Some(l) => Threshold::from_value((c - eps) * l[1] * l[2] / l[3]),
        None => Threshold::NotApplicable,
    }
}

/// Lower bound for the greatest prime factor of a large integer `u` with at
/// most `k >= 3` nonzero digits:
/// `(1/(k-2) - eps) log log u * log log log u / log log log log u`.
pub fn sparse_gpf_threshold(u: impl Into<Magnitude>, k: u32, eps: f64) -> Result<Threshold> {
    if k < 3 {
        return Err(Error::domain(format!("k must be at least 3, got {k}")));
    }
    check_eps(eps)?;
    Ok(iterated_ratio(u.into(), 1.0 / (k - 2) as f64, eps))
}

/// Lower bound for the greatest prime factor of a large power sum
/// `a_1^(n_1) + ... + a_k^(n_k) + 1`:
/// `(1/(k-1) - eps) log log v * log log log v / log log log log v`.
pub fn power_sum_gpf_threshold(v: impl Into<Magnitude>, k: u32, eps: f64) -> Result<Threshold> {
    if k < 2 {
        return Err(Error::domain(format!("k must be at least 2, got {k}")));
    }
    check_eps(eps)?;
    Ok(iterated_ratio(v.into(), 1.0 / (k - 1) as f64, eps))
}

/// `Psi = log log u / f(u)` for `u >= 3`.
pub fn psi(u: impl Into<Magnitude>, f_value: f64) -> Result<f64> {
    let u = u.into();
    if !(u.ln() >= 3f64.ln()) {
        return Err(Error::domain("psi needs u >= 3"));
    }
    if !(f_value > 0.0) || !f_value.is_finite() {
        return Err(Error::domain(format!(
            "f(u) must be positive, got {f_value}"
        )));
    }
    Ok(u.ln().ln() / f_value)
}

/// Lower bound for the greatest prime factor under a digit budget `f`:
/// `(delta0 - eps) Psi log Psi / log log Psi`, applicable when `Psi > e`.
pub fn budget_gpf_threshold(
    u: impl Into<Magnitude>,
    f_value: f64,
    delta0: f64,
    eps: f64,
) -> Result<Threshold> {
    if !(delta0 > 0.0 && delta0 <= 1.0) {
        return Err(Error::domain(format!(
            "delta0 must lie in (0, 1], got {delta0}"
        )));
    }
    check_eps(eps)?;
    let u = u.into();
    if !(u.ln() >= 3f64.ln()) {
        return Ok(Threshold::NotApplicable);
    }
    let p = psi(u, f_value)?;
    match logs(Magnitude::from_ln(p.ln()), 2) {
        Some(l) if p.is_finite() => Ok(Threshold::from_value((delta0 - eps) * p * l[0] / l[1])),
        _ => Ok(Threshold::NotApplicable),
    }
}

/// Lower bound for the nonzero-digit count of a large `S`-unit:
/// `(1 - eps) log log n / log log log n`, applicable for `n > e^e`.
pub fn s_unit_digit_threshold(n: impl Into<Magnitude>, eps: f64) -> Result<Threshold> {
    check_eps(eps)?;
    Ok(match logs(n, 3) {
        Some(l) => Threshold::from_value((1.0 - eps) * l[1] / l[2]),
        None => Threshold::NotApplicable,
    })
}

/// Stewart's digit-count bound `log n / (2 log log n)` for powers `a^n`.
pub fn stewart_bound(n: u64) -> Threshold {
    match logs(n, 2) {
        Some(l) => Threshold::from_value(l[0] / (2.0 * l[1])),
        None => Threshold::NotApplicable,
    }
}

/// One assertion of the smoothness/digit trade-off: a `smooth_bound`-smooth
/// integer should have at least `digit_bound` nonzero digits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SmoothDigitRow {
    Evaluated {
        smooth_bound: f64,
        digit_bound: f64,
        smooth: bool,
        /// Smooth with fewer nonzero digits than the bound.
        violated: bool,
    },
    NotApplicable,
}

impl SmoothDigitRow {
    pub fn is_violated(&self) -> bool {
        matches!(self, SmoothDigitRow::Evaluated { violated: true, .. })
    }
}

/// The three smoothness/digit assertions for `n` with `nz` nonzero digits:
///
/// 1. `l2 / (2 l4)`-smooth needs `l3` digits;
/// 2. `sqrt(l2 l3 / l4)`-smooth needs a third of that many digits;
/// 3. `l3 l4 / (2 l5)`-smooth needs `l2 / (2 l3)` digits,
///
/// where `l_i` is the `i`-fold iterated logarithm of `n`.
pub fn smooth_digit_check(n: &BigUint, nz: usize) -> Result<[SmoothDigitRow; 3]> {
    let levels = Magnitude::of_big(n);
    let nz = nz as f64;
    let row = |bounds: Option<(f64, f64)>| -> Result<SmoothDigitRow> {
        let Some((smooth_bound, digit_bound)) = bounds else {
            return Ok(SmoothDigitRow::NotApplicable);
        };
        if !smooth_bound.is_finite() || !digit_bound.is_finite() {
            return Ok(SmoothDigitRow::NotApplicable);
        }
        let smooth = is_smooth(n, smooth_bound)?;
        Ok(SmoothDigitRow::Evaluated {
            smooth_bound,
            digit_bound,
            smooth,
            violated: smooth && nz < digit_bound,
        })
    };
    let four = levels.iterated_logs(4);
    let five = levels.iterated_logs(5);
    let first = four.as_ref().map(|l| (l[1] / (2.0 * l[3]), l[2]));
    let second = four.as_ref().map(|l| {
        let s = (l[1] * l[2] / l[3]).sqrt();
        (s, s / 3.0)
    });
    let third = five
        .as_ref()
        .map(|l| (0.5 * l[2] * l[3] / l[4], l[1] / (2.0 * l[2])));
    Ok([row(first)?, row(second)?, row(third)?])
}

/// Whether `log P <= c log N / log log log N`, i.e. `P <= N^(c / l3(N))`;
/// `None` when `log log log N <= 0`.
pub fn cyclotomic_smoothness_check(
    n: impl Into<Magnitude>,
    greatest_prime: impl Into<Magnitude>,
    c: f64,
) -> Result<Option<bool>> {
    if !(c > 0.0) {
        return Err(Error::domain(format!("c must be positive, got {c}")));
    }
    let Some(l) = logs(n, 3) else {
        return Ok(None);
    };
    Ok(Some(greatest_prime.into().ln() <= c * l[0] / l[2]))
}

/// The least `c` passing [`cyclotomic_smoothness_check`]:
/// `log P * log log log N / log N`.
pub fn cyclotomic_c_min(
    n: impl Into<Magnitude>,
    greatest_prime: impl Into<Magnitude>,
) -> Threshold {
    match logs(n, 3) {
        Some(l) => Threshold::from_value(greatest_prime.into().ln() * l[2] / l[0]),
        None => Threshold::NotApplicable,
    }
}

/// Parameters shared by the threshold comparisons of a survey.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdParams {
    pub epsilon: f64,
    /// Overrides the `delta0` carried by a digit budget.
    pub delta0: Option<f64>,
    /// Constants of the digit/prime-gap inequality; derived from the base
    /// when absent.
    pub gap: Option<super::GapConstants>,
    pub c_cyclotomic: f64,
}

impl Default for ThresholdParams {
    fn default() -> Self {
        ThresholdParams {
            epsilon: 0.0,
            delta0: None,
            gap: None,
            c_cyclotomic: 1.0,
        }
    }
}

impl ThresholdParams {
    pub fn validate(&self) -> Result<()> {
        check_eps(self.epsilon)?;
        if let Some(d) = self.delta0 {
            if !(d > 0.0 && d <= 1.0) {
                return Err(Error::domain(format!("delta0 must lie in (0, 1], got {d}")));
            }
        }
        if !(self.c_cyclotomic > 0.0) {
            return Err(Error::domain("the cyclotomic constant must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn sparse_threshold_values() {
        let t = sparse_gpf_threshold(1e9, 3, 0.0).unwrap().value().unwrap();
        assert!(rel(t, 32.498_550_089_713_96) < 1e-12);
        let t4 = sparse_gpf_threshold(1e9, 4, 0.0).unwrap().value().unwrap();
        assert!(rel(2.0 * t4, t) < 1e-15);
        assert_eq!(
            sparse_gpf_threshold(1e6, 3, 0.0).unwrap(),
            Threshold::NotApplicable
        );
        assert!(sparse_gpf_threshold(1e9, 2, 0.0).is_err());
        assert!(sparse_gpf_threshold(1e9, 3, -0.1).is_err());
    }

    #[test]
    fn power_sum_threshold_values() {
        let a = power_sum_gpf_threshold(1e9, 2, 0.0).unwrap();
        assert_eq!(a, sparse_gpf_threshold(1e9, 3, 0.0).unwrap());
        let b = power_sum_gpf_threshold(1e9, 3, 0.0)
            .unwrap()
            .value()
            .unwrap();
        assert!(rel(2.0 * b, a.value().unwrap()) < 1e-15);
    }

    #[test]
    fn psi_values() {
        let u = Magnitude::from_ln(4f64.exp());
        assert!(rel(psi(u, 2.0).unwrap(), 2.0) < 1e-15);
        let u = Magnitude::of(1e12);
        assert!(rel(psi(u, u.ln().ln()).unwrap(), 1.0) < 1e-15);
        assert!(psi(u, 1.0).unwrap() > psi(u, 2.0).unwrap());
        assert!(psi(2.0, 1.0).is_err());
    }

    #[test]
    fn budget_threshold_values() {
        let e = std::f64::consts::E;
        // psi = e^e with f = 1
        let u = Magnitude::from_ln(e.powf(e).exp());
        let t = budget_gpf_threshold(u, 1.0, 1.0, 0.0)
            .unwrap()
            .value()
            .unwrap();
        assert!(rel(t, 41.193_555_674_716_12) < 1e-12);
        let degenerate = budget_gpf_threshold(u, 1.0, 0.5, 0.5).unwrap();
        assert!(degenerate.is_degenerate());
        let small = Magnitude::from_ln(e.exp());
        assert_eq!(
            budget_gpf_threshold(small, 1.0, 1.0, 0.0).unwrap(),
            Threshold::NotApplicable
        );
        assert!(budget_gpf_threshold(u, 1.0, 1.5, 0.0).is_err());
    }

    #[test]
    fn s_unit_threshold_values() {
        let t = s_unit_digit_threshold(1e9, 0.0).unwrap().value().unwrap();
        assert!(rel(t, 2.733_380_358_586_645) < 1e-12);
        assert_eq!(
            s_unit_digit_threshold(1e9, 1.0).unwrap(),
            Threshold::Value(0.0)
        );
        assert_eq!(
            s_unit_digit_threshold(10.0, 0.0).unwrap(),
            Threshold::NotApplicable
        );
    }

    #[test]
    fn stewart_bound_values() {
        assert!(rel(stewart_bound(10).value().unwrap(), 1.380_393) < 1e-6);
        assert!(rel(stewart_bound(3).value().unwrap(), 5.840_711) < 1e-6);
        assert_eq!(stewart_bound(2), Threshold::NotApplicable);
    }

    #[test]
    fn smooth_digit_rows() {
        let rows = smooth_digit_check(&BigUint::from(1_000_000u32), 1).unwrap();
        assert!(rows.iter().all(|r| *r == SmoothDigitRow::NotApplicable));
        let n = (BigUint::from(1u32) << 64u32) + 1u32;
        let rows = smooth_digit_check(&n, 2).unwrap();
        match rows[0] {
            SmoothDigitRow::Evaluated {
                smooth_bound,
                digit_bound,
                violated,
                ..
            } => {
                assert!((smooth_bound - 6.5971).abs() < 1e-3);
                assert!((digit_bound - 1.3330).abs() < 1e-3);
                assert!(!violated);
            }
            SmoothDigitRow::NotApplicable => panic!("row 1 applies"),
        }
        match rows[1] {
            SmoothDigitRow::Evaluated {
                smooth_bound,
                digit_bound,
                ..
            } => {
                assert!((smooth_bound - 4.1938).abs() < 1e-3);
                assert!((digit_bound - 1.3979).abs() < 1e-3);
            }
            SmoothDigitRow::NotApplicable => panic!("row 2 applies"),
        }
        assert_eq!(rows[2], SmoothDigitRow::NotApplicable);
    }

    #[test]
    fn cyclotomic_checks() {
        let c = cyclotomic_c_min(4097.0, 241.0).value().unwrap();
        assert!(rel(c, 0.494_984_165_439_208_4) < 1e-12);
        assert_eq!(
            cyclotomic_smoothness_check(4097.0, 241.0, c * 1.001).unwrap(),
            Some(true)
        );
        assert_eq!(
            cyclotomic_smoothness_check(4097.0, 241.0, c * 0.999).unwrap(),
            Some(false)
        );
        assert_eq!(cyclotomic_smoothness_check(10.0, 5.0, 1.0).unwrap(), None);
        assert!(cyclotomic_smoothness_check(4097.0, 241.0, 0.0).is_err());
    }
}
