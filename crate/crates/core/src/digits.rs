//! Base-b digit expansions.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{ln2_interval, ln_big, Interval};

/// One nonzero digit `digit * base^exponent` of an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub exponent: u64,
    pub digit: u64,
}

/// Positional representation of a positive integer keeping only the nonzero
/// digits, lowest exponent first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitExpansion {
    base: u64,
    terms: Vec<Term>,
}

impl DigitExpansion {
    /// Builds an expansion from explicit terms, checking that digits lie in
    /// `[1, base - 1]` and exponents strictly increase.
    pub fn new(base: u64, terms: Vec<Term>) -> Result<Self> {
        check_base(base)?;
        if terms.is_empty() {
            return Err(Error::domain("an expansion needs at least one term"));
        }
        for t in &terms {
            if t.digit == 0 || t.digit >= base {
                return Err(Error::domain(format!(
                    "digit {} outside [1, {}]",
                    t.digit,
                    base - 1
                )));
            }
        }
        if terms.windows(2).any(|w| w[0].exponent >= w[1].exponent) {
            return Err(Error::domain("exponents must strictly increase"));
        }
        Ok(DigitExpansion { base, terms })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of nonzero digits.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.exponent).collect()
    }

    pub fn digits(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.digit).collect()
    }

    /// Largest exponent; the value lies in `[base^top, base^(top+1))`.
    pub fn top_exponent(&self) -> u64 {
        self.terms.last().expect("non-empty expansion").exponent
    }

    pub fn leading_digit(&self) -> u64 {
        self.terms.last().expect("non-empty expansion").digit
    }

    pub fn is_divisible_by_base(&self) -> bool {
        self.terms[0].exponent > 0
    }

    /// Sum of the terms with index in `range` (0-based, lowest first).
    pub fn partial_value(&self, range: std::ops::Range<usize>) -> BigUint {
        let base = BigUint::from(self.base);
        self.terms[range]
            .iter()
            .map(|t| BigUint::from(t.digit) * base.pow(exponent_u32(t.exponent)))
            .sum()
    }

    pub fn value(&self) -> BigUint {
        recompose(self)
    }
}

fn exponent_u32(e: u64) -> u32 {
    u32::try_from(e).expect("exponent too large to materialize")
}

fn check_base(b: u64) -> Result<()> {
    if b < 2 {
        return Err(Error::domain(format!("base must be at least 2, got {b}")));
    }
    Ok(())
}

/// All base-b digits of `n`, least significant first.
pub(crate) fn digits_le(n: &BigUint, b: u64) -> Vec<u64> {
    if n.is_zero() {
        return vec![0];
    }
    if b <= 256 {
        return n.to_radix_le(b as u32).into_iter().map(u64::from).collect();
    }
    let divisor = BigUint::from(b);
    let mut rest = n.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&divisor);
        out.push(r.to_u64().expect("digit below base"));
        rest = q;
    }
    out
}

/// Splits `n >= 1` into its nonzero base-b digits.
pub fn decompose(n: &BigUint, b: u64) -> Result<DigitExpansion> {
    check_base(b)?;
    if n.is_zero() {
        return Err(Error::domain("cannot decompose 0"));
    }
    let terms = digits_le(n, b)
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d != 0)
        .map(|(i, d)| Term {
            exponent: i as u64,
            digit: d,
        })
        .collect();
    Ok(DigitExpansion { base: b, terms })
}

/// `sum d_i * b^(n_i)`.
pub fn recompose(e: &DigitExpansion) -> BigUint {
    let base = BigUint::from(e.base);
    let mut acc = BigUint::zero();
    let mut power = BigUint::one();
    let mut at = 0u64;
    for t in &e.terms {
        power *= base.pow(exponent_u32(t.exponent - at));
        at = t.exponent;
        acc += &power * t.digit;
    }
    acc
}

/// Number of nonzero base-b digits of `n`.
pub fn nz_count(n: &BigUint, b: u64) -> usize {
    assert!(b >= 2, "base must be at least 2");
    if b == 2 {
        return n.count_ones() as usize;
    }
    digits_le(n, b).into_iter().filter(|&d| d != 0).count()
}

/// Number of maximal runs of equal consecutive digits in the full base-b
/// digit string of `n`, zeros included.
pub fn block_count(n: &BigUint, b: u64) -> usize {
    assert!(b >= 2, "base must be at least 2");
    let digits = digits_le(n, b);
    1 + digits.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Whether `log n >= 2 log b (8 log b / log 2)^k`, the size hypothesis under
/// which the valuation chain closes.
///
/// Both sides are enclosed in intervals and the test only succeeds when the
/// enclosures are separated, so ties within rounding report `false`.
pub fn size_condition(n: &BigUint, b: u64, k: u32) -> bool {
    assert!(b >= 2, "base must be at least 2");
    if n.is_zero() {
        return false;
    }
    let lhs = ln_big(n);
    lhs.lo > size_condition_rhs(b, k).hi
}

/// Enclosure of `2 log b (8 log b / log 2)^k`.
pub(crate) fn size_condition_rhs(b: u64, k: u32) -> Interval {
    let ln_b = Interval::point(b as f64).ln();
    let ratio = Interval::point(8.0).mul(ln_b).div(ln2_interval());
    let mut power = Interval::point(1.0);
    for _ in 0..k {
        power = power.mul(ratio);
    }
    Interval::point(2.0).mul(ln_b).mul(power)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn decompose_examples() {
        let e = decompose(&big(4097), 2).unwrap();
        assert_eq!(e.exponents(), vec![0, 12]);
        assert_eq!(e.digits(), vec![1, 1]);

        let e = decompose(&big(7), 10).unwrap();
        assert_eq!(e.exponents(), vec![0]);
        assert_eq!(e.digits(), vec![7]);

        let e = decompose(&big(105), 10).unwrap();
        assert_eq!(e.exponents(), vec![0, 2]);
        assert_eq!(e.digits(), vec![5, 1]);
    }

    #[test]
    fn decompose_rejects_zero_and_small_base() {
        assert!(decompose(&big(0), 10).is_err());
        assert!(decompose(&big(5), 1).is_err());
    }

    #[test]
    fn recompose_examples() {
        let terms = |pairs: &[(u64, u64)]| {
            pairs
                .iter()
                .map(|&(exponent, digit)| Term { exponent, digit })
                .collect::<Vec<_>>()
        };
        let e = DigitExpansion::new(2, terms(&[(0, 1), (12, 1)])).unwrap();
        assert_eq!(recompose(&e), big(4097));
        let e = DigitExpansion::new(10, terms(&[(0, 7)])).unwrap();
        assert_eq!(recompose(&e), big(7));
        let e = DigitExpansion::new(2, terms(&[(0, 1), (6, 1), (10, 1)])).unwrap();
        assert_eq!(recompose(&e), big(1089));
    }

    #[test]
    fn expansion_rejects_bad_terms() {
        let t = |exponent, digit| Term { exponent, digit };
        assert!(DigitExpansion::new(10, vec![t(0, 0)]).is_err());
        assert!(DigitExpansion::new(10, vec![t(0, 10)]).is_err());
        assert!(DigitExpansion::new(10, vec![t(2, 1), t(2, 3)]).is_err());
        assert!(DigitExpansion::new(10, vec![]).is_err());
    }

    #[test]
    fn nonzero_digit_counts() {
        assert_eq!(nz_count(&big(1024), 2), 1);
        assert_eq!(nz_count(&big(4097), 2), 2);
        assert_eq!(nz_count(&big(105), 10), 2);
        assert_eq!(nz_count(&big(1024), 3), 6);
    }

    #[test]
    fn block_counts() {
        assert_eq!(block_count(&big(11), 2), 3);
        assert_eq!(block_count(&big(7), 2), 1);
        assert_eq!(block_count(&big(4097), 2), 3);
        assert_eq!(block_count(&big(999), 10), 1);
    }

    #[test]
    fn large_base_uses_division_path() {
        let b = 1000u64;
        let n = big(5 * 1000 * 1000 + 7);
        let e = decompose(&n, b).unwrap();
        assert_eq!(e.exponents(), vec![0, 2]);
        assert_eq!(e.digits(), vec![7, 5]);
        assert_eq!(recompose(&e), n);
    }

    #[test]
    fn size_condition_examples() {
        let two = big(2);
        assert!(size_condition(&two.pow(1100), 2, 3));
        assert!(!size_condition(&big(1_000_000), 2, 3));
        // exact tie: 1024 log 2 on both sides
        assert!(!size_condition(&two.pow(1024), 2, 3));
        assert!(size_condition(&two.pow(1025), 2, 3));
    }

    #[test]
    fn divisibility_by_base_follows_lowest_exponent() {
        assert!(decompose(&big(100), 10).unwrap().is_divisible_by_base());
        assert!(!decompose(&big(101), 10).unwrap().is_divisible_by_base());
    }
}
