//! Nonzero-digit counts of the powers `a^n` in base `b` against Stewart's
//! lower bound.

use std::ops::RangeInclusive;

use num_bigint::BigUint;
use serde::Serialize;

use super::output::{opt_field, threshold_field, Row};
use crate::bounds::{stewart_bound, Threshold};
use crate::digits::nz_count;
use crate::error::{Error, Result};
use crate::factor::perfect_power;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StewartRow {
    pub n: u64,
    /// Nonzero digits of `a^n` in base `b`.
    pub nz: usize,
    pub bound: Threshold,
    pub exceeds: Option<bool>,
    /// Set when the count does not exceed the bound; the bound is only
    /// claimed for large `n`, so this is reported rather than asserted.
    pub flagged: bool,
}

impl Row for StewartRow {
    fn csv_header() -> Vec<&'static str> {
        vec!["n", "nz", "bound", "exceeds", "flagged"]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.nz.to_string(),
            threshold_field(&self.bound),
            opt_field(&self.exceeds),
            self.flagged.to_string(),
        ]
    }

    fn text(&self) -> String {
        format!(
            "n={} nz={} bound={}{}",
            self.n,
            self.nz,
            self.bound
                .value()
                .map_or("n/a".to_string(), |v| format!("{v:.4}")),
            if self.flagged { " FLAGGED" } else { "" }
        )
    }
}

/// Rows for `n` in the range, computing `a^n` incrementally.
pub struct StewartSurvey {
    a: BigUint,
    b: u64,
    n: u64,
    end: u64,
    power: BigUint,
}

impl Iterator for StewartSurvey {
    type Item = StewartRow;

    fn next(&mut self) -> Option<StewartRow> {
        if self.n > self.end {
            return None;
        }
        let n = self.n;
        let nz = nz_count(&self.power, self.b);
        let bound = stewart_bound(n);
        let exceeds = bound.value().map(|v| nz as f64 > v);
        self.power *= &self.a;
        self.n += 1;
        Some(StewartRow {
            n,
            nz,
            bound,
            exceeds,
            flagged: exceeds != Some(true),
        })
    }
}

/// Surveys `a^n` in base `b` for `n` in `range`, `n >= 3`. `a` and `b` must
/// be multiplicatively independent, i.e. not powers of a common integer.
pub fn stewart_survey(a: u64, b: u64, range: RangeInclusive<u64>) -> Result<StewartSurvey> {
    if a < 2 || b < 2 {
        return Err(Error::domain(format!(
            "a and b must be at least 2, got a = {a}, b = {b}"
        )));
    }
    if perfect_power(a).0 == perfect_power(b).0 {
        return Err(Error::domain(format!(
            "{a} and {b} are powers of {} and so multiplicatively dependent",
            perfect_power(a).0
        )));
    }
    let (start, end) = range.into_inner();
    if start < 3 {
        return Err(Error::domain(format!("n must be at least 3, got {start}")));
    }
    let a_big = BigUint::from(a);
    Ok(StewartSurvey {
        power: a_big.pow(u32::try_from(start).map_err(|_| Error::domain("n too large"))?),
        a: a_big,
        b,
        n: start,
        end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let row = stewart_survey(2, 3, 10..=10).unwrap().next().unwrap();
        assert_eq!(row.nz, 6);
        assert!((row.bound.value().unwrap() - 1.380393).abs() < 1e-6);
        assert_eq!(row.exceeds, Some(true));
        assert!(!row.flagged);

        let row = stewart_survey(3, 2, 3..=3).unwrap().next().unwrap();
        assert_eq!(row.nz, 4);
        assert_eq!(row.exceeds, Some(false));
        assert!(row.flagged);
    }

    #[test]
    fn dependent_pairs_rejected() {
        assert!(stewart_survey(2, 2, 3..=5).is_err());
        assert!(stewart_survey(4, 8, 3..=5).is_err());
        assert!(stewart_survey(6, 36, 3..=5).is_err());
        assert!(stewart_survey(2, 3, 2..=5).is_err());
        assert!(stewart_survey(12, 18, 3..=5).is_ok());
    }

    #[test]
    fn one_row_per_n() {
        let rows: Vec<_> = stewart_survey(5, 7, 3..=50).unwrap().collect();
        assert_eq!(rows.len(), 48);
        assert_eq!(rows.last().unwrap().n, 50);
        let (lo, hi) = (10, 9);
        assert!(stewart_survey(5, 7, lo..=hi).unwrap().next().is_none());
    }
}
