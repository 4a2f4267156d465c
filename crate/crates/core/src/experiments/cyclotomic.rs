//! `2^n + 1` as the product of the cyclotomic values `Phi_d(2)` over the
//! divisors `d` of `2n` that do not divide `n`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::output::{opt_field, pairs_field, serialize_big, threshold_field, Row};
use super::FactorSummary;
use crate::bounds::{cyclotomic_c_min, Threshold};
use crate::error::{Error, Result};
use crate::factor::{factorize, factorize_u64, mobius, Budget, Factorization};

/// Divisors of `n >= 1`, increasing.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize_u64(n).pairs() {
        let p: u64 = p.try_into().expect("factor of a u64");
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for &d in &out {
            let mut q = d;
            for _ in 0..=*e {
                next.push(q);
                q = q.saturating_mul(p);
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// `Phi_d(2) = prod_(e | d) (2^(d/e) - 1)^mu(e)`, exactly.
pub fn cyclotomic_at_two(d: u64) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::domain("cyclotomic index must be positive"));
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in divisors(d) {
        let shift =
            u32::try_from(d / e).map_err(|_| Error::domain("cyclotomic index too large"))?;
        let term = (BigUint::one() << shift) - 1u32;
        match mobius(e) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r == BigUint::ZERO);
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclotomicFactor {
    pub d: u64,
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
    pub factorization: FactorSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclotomicReport {
    pub n: u64,
    /// `2^n + 1`.
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
    pub factors: Vec<CyclotomicFactor>,
    /// Whether the cyclotomic values multiply to `2^n + 1` exactly.
    pub product_ok: bool,
    /// Merged factorization of `2^n + 1`.
    pub factorization: FactorSummary,
    /// Least `c` with `log P <= c log N / log log log N`.
    pub c_min: Threshold,
}

impl Row for CyclotomicReport {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "n",
            "value",
            "d",
            "phi",
            "product_ok",
            "complete",
            "factors",
            "P",
            "c_min",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        let join = |f: &dyn Fn(&CyclotomicFactor) -> String| {
            self.factors.iter().map(f).collect::<Vec<_>>().join(";")
        };
        vec![
            self.n.to_string(),
            self.value.to_string(),
            join(&|c| c.d.to_string()),
            join(&|c| c.value.to_string()),
            self.product_ok.to_string(),
            self.factorization.complete.to_string(),
            pairs_field(&self.factorization.factors),
            opt_field(&self.factorization.greatest_prime),
            threshold_field(&self.c_min),
        ]
    }

    fn text(&self) -> String {
        let mut out = format!("2^{} + 1 = {}\n", self.n, self.value);
        for c in &self.factors {
            out.push_str(&format!("  Phi_{}(2) = {}\n", c.d, c.value));
        }
        out.push_str(&format!(
            "  product check {}\n  factors {}{}\n  P = {}  c_min = {}",
            if self.product_ok { "OK" } else { "FAILED" },
            pairs_field(&self.factorization.factors),
            if self.factorization.complete {
                ""
            } else {
                " (partial)"
            },
            opt_field(&self.factorization.greatest_prime),
            self.c_min
                .value()
                .map_or("n/a".to_string(), |v| v.to_string()),
        ));
        out
    }
}

/// Builds `2^n + 1` from cyclotomic values, factoring each value separately
/// under `budget`.
pub fn cyclotomic_smooth(n: u64, budget: Budget) -> Result<CyclotomicReport> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let shift = u32::try_from(n).map_err(|_| Error::domain("n too large"))?;
    let value = (BigUint::one() << shift) + 1u32;
    let two_n = n
        .checked_mul(2)
        .ok_or_else(|| Error::domain("n too large"))?;
    let mut parts = Vec::new();
    let mut factors = Vec::new();
    for d in divisors(two_n)
        .into_iter()
        .filter(|d| !n.is_multiple_of(*d))
    {
        let phi = cyclotomic_at_two(d)?;
        let f = factorize(&phi, budget);
        factors.push(CyclotomicFactor {
            d,
            value: phi,
            factorization: FactorSummary::of(&f),
        });
        parts.push(f);
    }
    let product: BigUint = factors.iter().map(|c| &c.value).product();
    let merged = Factorization::merge(&parts);
    let summary = FactorSummary::of(&merged);
    let c_min = match &summary.greatest_prime {
        Some(p) => cyclotomic_c_min(&value, p),
        None => Threshold::NotApplicable,
    };
    Ok(CyclotomicReport {
        n,
        product_ok: product == value,
        value,
        factors,
        factorization: summary,
        c_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(24), vec![1, 2, 3, 4, 6, 8, 12, 24]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn small_cyclotomic_values() {
        // Phi_1..Phi_12 at 2
        let expected = [1u64, 3, 7, 5, 31, 3, 127, 17, 73, 11, 2047, 13];
        for (d, want) in (1..=12).zip(expected) {
            assert_eq!(
                cyclotomic_at_two(d).unwrap(),
                BigUint::from(want),
                "d = {d}"
            );
        }
    }

    #[test]
    fn n_twelve() {
        let r = cyclotomic_smooth(12, Budget::default()).unwrap();
        let ds: Vec<_> = r.factors.iter().map(|c| (c.d, c.value.clone())).collect();
        assert_eq!(
            ds,
            vec![(8, BigUint::from(17u32)), (24, BigUint::from(241u32))]
        );
        assert!(r.product_ok);
        assert_eq!(r.factorization.greatest_prime, Some(BigUint::from(241u32)));
        assert!((r.c_min.value().unwrap() - 0.4949841654392084).abs() < 1e-12);
    }

    #[test]
    fn smallest_cases() {
        let r = cyclotomic_smooth(1, Budget::default()).unwrap();
        assert_eq!(r.factors.len(), 1);
        assert_eq!(
            (r.factors[0].d, r.factors[0].value.clone()),
            (2, BigUint::from(3u32))
        );
        assert!(r.product_ok);
        let r = cyclotomic_smooth(2, Budget::default()).unwrap();
        assert_eq!(
            (r.factors[0].d, r.factors[0].value.clone()),
            (4, BigUint::from(5u32))
        );
        assert!(cyclotomic_smooth(0, Budget::default()).is_err());
    }
}
