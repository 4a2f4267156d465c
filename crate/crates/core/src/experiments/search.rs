//! Smooth integers with few nonzero digits.

use num_bigint::BigUint;
use serde::Serialize;

use super::output::{opt_field, serialize_big, threshold_field, Row};
use crate::bounds::{s_unit_digit_threshold, Threshold};
use crate::digits::nz_count;
use crate::enumerate::smooth_sequence;
use crate::error::{Error, Result};
use crate::factor::PrimeSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchHit {
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
    pub nz: usize,
    /// Lower bound for the digit count of a large `S`-unit.
    pub s_unit_digits: Threshold,
    /// Whether `nz` exceeds that bound.
    pub exceeds: Option<bool>,
}

impl Row for SearchHit {
    fn csv_header() -> Vec<&'static str> {
        vec!["value", "nz", "s_unit_digits", "exceeds"]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.value.to_string(),
            self.nz.to_string(),
            threshold_field(&self.s_unit_digits),
            opt_field(&self.exceeds),
        ]
    }

    fn text(&self) -> String {
        format!("{} nz={}", self.value, self.nz)
    }
}

/// Every `S`-unit up to `limit`, not divisible by `b`, with at most `k`
/// nonzero base-`b` digits, in increasing order. An empty result is a
/// legitimate answer.
pub fn smooth_sparse_search(
    b: u64,
    k: usize,
    primes: &PrimeSet,
    limit: &BigUint,
    eps: f64,
) -> Result<Vec<SearchHit>> {
    if b < 2 {
        return Err(Error::domain(format!("base must be at least 2, got {b}")));
    }
    if k < 1 {
        return Err(Error::domain("k must be at least 1"));
    }
    // validates eps once
    s_unit_digit_threshold(1.0, eps)?;
    let bb = BigUint::from(b);
    smooth_sequence(primes, limit.clone())
        .filter(|n| !(n % &bb).eq(&BigUint::ZERO))
        .filter_map(|n| {
            let nz = nz_count(&n, b);
            (nz <= k).then_some((n, nz))
        })
        .map(|(value, nz)| {
            let t = s_unit_digit_threshold(&value, eps)?;
            Ok(SearchHit {
                exceeds: t.value().map(|v| nz as f64 > v),
                s_unit_digits: t,
                value,
                nz,
            })
        })
        .collect()
}
