//! Factorization and the quantities derived from it: greatest prime factor,
//! number of distinct prime factors, radical, S-parts, smoothness and p-adic
//! valuations.

mod arith;
pub mod primality;
mod split;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
pub use primality::{is_prime, is_prime_u64, DETERMINISTIC_LIMIT, PROBABILISTIC_ROUNDS};
use primality::{recertify, small_primes, SMALL_PRIME_BOUND};

/// Upper limit on factoring work, in modular multiplications spent by the
/// splitting routines. Trial division and primality tests are not charged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub effort: u64,
}

impl Budget {
    pub const DEFAULT_EFFORT: u64 = 1 << 21;

    pub fn new(effort: u64) -> Self {
        Budget { effort }
    }

    pub fn unlimited() -> Self {
        Budget { effort: u64::MAX }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            effort: Self::DEFAULT_EFFORT,
        }
    }
}

/// What is left after the budget ran out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cofactor {
    Complete,
    /// Product of the composites that could not be split.
    Partial(BigUint),
}

/// Prime-power decomposition `n = q_1^{r_1} ... q_s^{r_s} * cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    n: BigUint,
    pairs: Vec<(BigUint, u32)>,
    cofactor: Cofactor,
}

impl Factorization {
    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn pairs(&self) -> &[(BigUint, u32)] {
        &self.pairs
    }

    pub fn cofactor(&self) -> &Cofactor {
        &self.cofactor
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor == Cofactor::Complete
    }

    fn require_complete(&self) -> Result<()> {
        match &self.cofactor {
            Cofactor::Complete => Ok(()),
            Cofactor::Partial(c) => Err(Error::IncompleteFactorization(c.to_string())),
        }
    }

    /// Product of all prime powers and the unsplit cofactor.
    pub fn product(&self) -> BigUint {
        let mut acc: BigUint = self.pairs.iter().map(|(p, e)| p.pow(*e)).product();
        if let Cofactor::Partial(c) = &self.cofactor {
            acc *= c;
        }
        acc
    }

    /// `P[n]`, with `P[1] = 1`.
    pub fn greatest_prime_factor(&self) -> Result<BigUint> {
        self.require_complete()?;
        Ok(self
            .pairs
            .last()
            .map(|(p, _)| p.clone())
            .unwrap_or_else(BigUint::one))
    }

    /// `omega(n)`.
    pub fn omega(&self) -> Result<usize> {
        self.require_complete()?;
        Ok(self.pairs.len())
    }

    /// Greatest square-free divisor.
    pub fn radical(&self) -> Result<BigUint> {
        self.require_complete()?;
        Ok(self.pairs.iter().map(|(p, _)| p).product())
    }

    /// Combines factorizations of coprime-or-not pieces into one of their
    /// product, adding exponents of shared primes.
    pub fn merge(parts: &[Factorization]) -> Factorization {
        let mut pairs: Vec<(BigUint, u32)> =
            parts.iter().flat_map(|f| f.pairs.iter().cloned()).collect();
        pairs.sort();
        let pairs = coalesce(pairs);
        let mut rest = BigUint::one();
        for f in parts {
            if let Cofactor::Partial(c) = &f.cofactor {
                rest *= c;
            }
        }
        Factorization {
            n: parts.iter().map(|f| &f.n).product(),
            pairs,
            cofactor: if rest.is_one() {
                Cofactor::Complete
            } else {
                Cofactor::Partial(rest)
            },
        }
    }
}

fn coalesce(sorted: Vec<(BigUint, u32)>) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::with_capacity(sorted.len());
    for (p, e) in sorted {
        match out.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => out.push((p, e)),
        }
    }
    out
}

/// Strictly increasing set of verified primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    /// Sorts and deduplicates the input, then checks every member is prime.
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        primes.dedup();
        if primes.is_empty() {
            return Err(Error::domain("a prime set needs at least one prime"));
        }
        if let Some(&bad) = primes.iter().find(|&&p| !is_prime_u64(p)) {
            return Err(Error::NotPrime(bad.to_string()));
        }
        Ok(PrimeSet { primes })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn largest(&self) -> u64 {
        *self.primes.last().expect("non-empty prime set")
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }
}

fn rem_words(words: &[u64], p: u64) -> u64 {
    words
        .iter()
        .rev()
        .fold(0u128, |r, &w| ((r << 64) | w as u128) % p as u128) as u64
}

/// Divides out the small-prime part of `n`, returning the found pairs and
/// the cofactor, which has no prime factor below [`SMALL_PRIME_BOUND`].
fn trial_divide(n: &BigUint) -> (Vec<(BigUint, u32)>, BigUint) {
    let mut pairs = Vec::new();
    if let Some(mut m) = n.to_u64() {
        for &p in small_primes() {
            let p = p as u64;
            if p * p > m {
                break;
            }
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                pairs.push((BigUint::from(p), e));
            }
        }
        if m > 1 && m < (SMALL_PRIME_BOUND as u64).pow(2) {
            pairs.push((BigUint::from(m), 1));
            m = 1;
        }
        return (pairs, BigUint::from(m));
    }
    let mut m = n.clone();
    let mut words: Vec<u64> = m.to_u64_digits();
    for &p in small_primes() {
        let p = p as u64;
        if rem_words(&words, p) != 0 {
            continue;
        }
        let mut e = 0;
        let divisor = BigUint::from(p);
        loop {
            let (q, r) = m.div_rem(&divisor);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        pairs.push((divisor, e));
        words = m.to_u64_digits();
        if m.is_one() {
            break;
        }
    }
    if m.bits() <= 32 && m > BigUint::one() {
        // no factor below 2^16, so anything below 2^32 is prime
        pairs.push((m, 1));
        m = BigUint::one();
    }
    (pairs, m)
}

/// Largest `k` such that `n` is a perfect `k`-th power, with its root, given
/// that any root has at least `min_root_bits` bits.
fn perfect_power_big(n: &BigUint, min_root_bits: u32) -> (BigUint, u32) {
    let max_k = (n.bits() as u32 / min_root_bits.max(1)).max(2);
    for k in (2..=max_k).rev() {
        let r = n.nth_root(k);
        if r > BigUint::one() && &r.pow(k) == n {
            return (r, k);
        }
    }
    (n.clone(), 1)
}

fn split(n: &BigUint, effort: &mut u64, tried_p_minus_one: &mut bool) -> Option<BigUint> {
    if let Some(small) = n.to_u64() {
        return split::rho_u64(small, effort).map(BigUint::from);
    }
    if n.bits() <= 127 {
        let wide = n.to_u128().expect("fits in 127 bits");
        return split::rho_u128(wide, effort).map(BigUint::from);
    }
    if !*tried_p_minus_one {
        *tried_p_minus_one = true;
        if let Some(d) = split::p_minus_one(n, effort) {
            return Some(d);
        }
    }
    split::rho_big(n, effort)
}

/// Factors `n >= 1` by trial division below 2^16, then Pollard p-1 and
/// Pollard-Brent rho. If `budget` runs out the unsplit composites are kept
/// as a partial cofactor; every reported prime above the trial range is
/// re-certified.
pub fn factorize(n: &BigUint, budget: Budget) -> Factorization {
    assert!(!n.is_zero(), "factorize requires n >= 1");
    let (mut pairs, rest) = trial_divide(n);
    let mut stuck = BigUint::one();
    let mut effort = budget.effort;
    let mut stack: Vec<(BigUint, u32, bool)> = Vec::new();
    if !rest.is_one() {
        stack.push((rest, 1, false));
    }
    while let Some((m, mult, mut tried)) = stack.pop() {
        if is_prime(&m) {
            pairs.push((m, mult));
            continue;
        }
        let (root, k) = perfect_power_big(&m, 16);
        if k > 1 {
            stack.push((root, mult * k, false));
            continue;
        }
        match split(&m, &mut effort, &mut tried) {
            Some(d) => {
                let other = &m / &d;
                stack.push((d, mult, false));
                stack.push((other, mult, false));
            }
            None => stuck *= m.pow(mult),
        }
    }
    pairs.sort();
    let threshold = BigUint::from(SMALL_PRIME_BOUND);
    // A failed re-check proves compositeness; keep it as unsplit.
    let (pairs, rejected): (Vec<_>, Vec<_>) = pairs
        .into_iter()
        .partition(|(p, _)| p < &threshold || recertify(p));
    for (p, e) in rejected {
        stuck *= p.pow(e);
    }
    let pairs = coalesce(pairs);
    Factorization {
        n: n.clone(),
        pairs,
        cofactor: if stuck.is_one() {
            Cofactor::Complete
        } else {
            Cofactor::Partial(stuck)
        },
    }
}

/// Complete factorization of a machine word (never budget-limited).
pub fn factorize_u64(n: u64) -> Factorization {
    factorize(&BigUint::from(n), Budget::unlimited())
}

/// `P[n]` under the default budget.
pub fn greatest_prime_factor(n: &BigUint) -> Result<BigUint> {
    factorize(n, Budget::default()).greatest_prime_factor()
}

/// `omega(n)` under the default budget.
pub fn omega(n: &BigUint) -> Result<usize> {
    factorize(n, Budget::default()).omega()
}

/// Greatest square-free divisor under the default budget.
pub fn radical(n: &BigUint) -> Result<BigUint> {
    factorize(n, Budget::default()).radical()
}

/// Largest divisor of `n` supported on `primes`, by repeated division.
pub fn s_part(n: &BigUint, primes: &PrimeSet) -> BigUint {
    let mut rest = n.clone();
    let mut part = BigUint::one();
    for &p in primes.primes() {
        let p = BigUint::from(p);
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            part *= &p;
        }
    }
    part
}

pub fn is_s_unit(n: &BigUint, primes: &PrimeSet) -> bool {
    &s_part(n, primes) == n
}

/// Whether every prime factor of `n` is at most `bound`.
///
/// Primes up to `min(bound, 2^16)` are divided out directly. Only when the
/// bound exceeds the trial range and the cofactor exceeds the bound does this
/// fall back to factoring the cofactor, which can fail on budget.
pub fn is_smooth(n: &BigUint, bound: f64) -> Result<bool> {
    assert!(!n.is_zero(), "smoothness of 0 is undefined");
    if n.is_one() {
        return Ok(true);
    }
    let mut rest = n.clone();
    for &p in small_primes() {
        if (p as f64) > bound {
            return Ok(rest.is_one());
        }
        let divisor = BigUint::from(p);
        loop {
            let (q, r) = rest.div_rem(&divisor);
            if !r.is_zero() {
                break;
            }
            rest = q;
        }
        if rest.is_one() {
            return Ok(true);
        }
    }
    if rest.to_f64().is_some_and(|r| r <= bound) {
        return Ok(true);
    }
    let f = factorize(&rest, Budget::default());
    let largest = f.greatest_prime_factor()?;
    Ok(largest.to_f64().is_some_and(|p| p <= bound))
}

/// `v_p(n)` for a nonzero integer.
fn valuation_int(n: &BigInt, p: &BigInt) -> i64 {
    let mut v = 0;
    let mut rest = n.abs();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        rest = q;
        v += 1;
    }
}

/// Exponent of `p` in the prime decomposition of the nonzero rational `z`.
pub fn p_adic_valuation(z: &BigRational, p: u64) -> Result<i64> {
    if z.is_zero() {
        return Err(Error::domain("the valuation of 0 is undefined"));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let p = BigInt::from(p);
    Ok(valuation_int(z.numer(), &p) - valuation_int(z.denom(), &p))
}

/// Smallest prime divisor of `b >= 2`.
pub fn smallest_prime_factor(b: u64) -> Result<u64> {
    if b < 2 {
        return Err(Error::domain(format!("{b} has no prime divisor")));
    }
    if b.is_multiple_of(2) {
        return Ok(2);
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= b {
        if b.is_multiple_of(d) {
            return Ok(d);
        }
        d += 2;
    }
    Ok(b)
}

/// Writes `n >= 2` as `root^exponent` with the largest possible exponent.
pub fn perfect_power(n: u64) -> (u64, u32) {
    let (root, k) = perfect_power_big(&BigUint::from(n), 1);
    (root.to_u64().expect("root below n"), k)
}

/// Möbius function of `n >= 1`.
pub fn mobius(n: u64) -> i32 {
    let f = factorize_u64(n);
    if f.pairs().iter().any(|(_, e)| *e > 1) {
        0
    } else if f.pairs().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn pairs_u64(f: &Factorization) -> Vec<(u64, u32)> {
        f.pairs()
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(pairs_u64(&factorize_u64(720)), vec![(2, 4), (3, 2), (5, 1)]);
        assert_eq!(pairs_u64(&factorize_u64(4097)), vec![(17, 1), (241, 1)]);
        assert!(factorize_u64(1).pairs().is_empty());
        assert!(factorize_u64(1).is_complete());
    }

    #[test]
    fn factorize_multiword_values() {
        let n = (BigUint::one() << 64u32) + 1u32;
        let f = factorize(&n, Budget::default());
        assert_eq!(pairs_u64(&f), vec![(274_177, 1), (67_280_421_310_721, 1)]);

        // prime power with a large base
        let p = big(1_000_000_007);
        let n = p.pow(5) * 12u32;
        let f = factorize(&n, Budget::default());
        assert_eq!(pairs_u64(&f), vec![(2, 2), (3, 1), (1_000_000_007, 5)]);
    }

    #[test]
    fn exhausted_budget_reports_partial_cofactor() {
        let p = (BigUint::one() << 61u32) - 1u32;
        let q = (BigUint::one() << 89u32) - 1u32;
        let n = &p * &q * 6u32;
        let f = factorize(&n, Budget::new(10));
        assert!(!f.is_complete());
        assert_eq!(f.cofactor(), &Cofactor::Partial(&p * &q));
        assert_eq!(f.product(), n);
        assert!(matches!(
            f.greatest_prime_factor(),
            Err(Error::IncompleteFactorization(_))
        ));
        assert!(f.omega().is_err());
        assert!(f.radical().is_err());
    }

    #[test]
    fn derived_quantities() {
        assert_eq!(greatest_prime_factor(&big(1)).unwrap(), big(1));
        assert_eq!(greatest_prime_factor(&big(33)).unwrap(), big(11));
        assert_eq!(greatest_prime_factor(&big(4097)).unwrap(), big(241));
        assert_eq!(omega(&big(12)).unwrap(), 2);
        assert_eq!(omega(&big(1)).unwrap(), 0);
        assert_eq!(omega(&big(720)).unwrap(), 3);
        assert_eq!(radical(&big(720)).unwrap(), big(30));
        assert_eq!(radical(&big(8)).unwrap(), big(2));
        assert_eq!(radical(&big(4097)).unwrap(), big(4097));
    }

    #[test]
    fn s_parts_and_units() {
        let s23 = PrimeSet::new(vec![3, 2]).unwrap();
        assert_eq!(s_part(&big(720), &s23), big(144));
        assert_eq!(s_part(&big(7), &s23), big(1));
        let s235 = PrimeSet::new(vec![2, 3, 5]).unwrap();
        assert_eq!(s_part(&big(720), &s235), big(720));
        assert!(is_s_unit(&big(144), &s23));
        assert!(!is_s_unit(&big(145), &s23));
        assert!(is_s_unit(&big(1), &s23));
    }

    #[test]
    fn prime_set_validation() {
        assert!(PrimeSet::new(vec![]).is_err());
        assert_eq!(PrimeSet::new(vec![2, 4]), Err(Error::NotPrime("4".into())));
        assert_eq!(PrimeSet::new(vec![5, 2, 5]).unwrap().primes(), &[2, 5]);
    }

    #[test]
    fn smoothness() {
        assert!(is_smooth(&big(1), 0.5).unwrap());
        assert!(is_smooth(&big(4097), 241.0).unwrap());
        assert!(!is_smooth(&big(4097), 240.0).unwrap());
        assert!(is_smooth(&big(720), 5.0).unwrap());
        assert!(!is_smooth(&big(720), 4.99).unwrap());
        let n = (BigUint::one() << 64u32) + 1u32;
        assert!(is_smooth(&n, 7e13).unwrap());
        assert!(!is_smooth(&n, 6e13).unwrap());
    }

    #[test]
    fn valuations() {
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(p_adic_valuation(&q(45, 7), 3).unwrap(), 2);
        assert_eq!(p_adic_valuation(&q(1, 8), 2).unwrap(), -3);
        assert_eq!(p_adic_valuation(&q(1088, 1), 2).unwrap(), 6);
        assert_eq!(p_adic_valuation(&q(-9, 4), 3).unwrap(), 2);
        assert!(p_adic_valuation(&q(0, 1), 2).is_err());
        assert!(p_adic_valuation(&q(3, 1), 4).is_err());
    }

    #[test]
    fn smallest_prime_factors() {
        assert_eq!(smallest_prime_factor(2).unwrap(), 2);
        assert_eq!(smallest_prime_factor(15).unwrap(), 3);
        assert_eq!(smallest_prime_factor(91).unwrap(), 7);
        assert_eq!(smallest_prime_factor(97).unwrap(), 97);
        assert!(smallest_prime_factor(1).is_err());
    }

    #[test]
    fn perfect_powers_and_mobius() {
        assert_eq!(perfect_power(64), (2, 6));
        assert_eq!(perfect_power(36), (6, 2));
        assert_eq!(perfect_power(12), (12, 1));
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
    }
}
