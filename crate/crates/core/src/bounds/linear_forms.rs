//! Explicit lower bounds for linear forms in logarithms of rationals: the
//! archimedean bound of Matveev and the p-adic bound of Yu, evaluated with
//! outward rounding.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use crate::error::{Error, Result};
use crate::factor::is_prime_u64;
use crate::numeric::{e_interval, ln_big, Interval};

/// A height `A_i`, either as a value or, for numbers beyond `f64`, through an
/// enclosure of its logarithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Height {
    Value(f64),
    Log(Interval),
}

impl Height {
    /// Enclosure of `log A`.
    pub fn ln(&self) -> Interval {
        match self {
            Height::Value(a) => Interval::point(*a).ln(),
            Height::Log(l) => *l,
        }
    }

    /// `max(n, e)` for a positive integer.
    pub fn of_integer(n: &BigUint) -> Height {
        if *n <= BigUint::from(2u32) {
            return Height::Log(Interval::point(1.0));
        }
        let ln = ln_big(n);
        Height::Log(Interval::new(ln.lo.max(1.0), ln.hi.max(1.0)))
    }
}

/// Enclosure of `log max(|x|, |y|, e)` for `x/y` in lowest terms.
fn ln_naive_height(q: &BigRational) -> Interval {
    let top = q.numer().magnitude().max(q.denom().magnitude()).clone();
    Height::of_integer(&top).ln()
}

/// Largest bit size of `prod (x_i/y_i)^(b_i)` we are willing to build exactly.
const EXACT_PRODUCT_BITS: u64 = 1 << 20;

/// Data for a linear form `(x_1/y_1)^(b_1) ... (x_n/y_n)^(b_n) - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundInput {
    rationals: Vec<BigRational>,
    exponents: Vec<i64>,
    heights: Vec<Height>,
    exponent_bound: f64,
}

impl BoundInput {
    /// Checks `n >= 2`, nonzero rationals, `A_i >= max(|x_i|, |y_i|, e)`,
    /// `B >= max(3, |b_i|)`, and that the product is not 1 when it is small
    /// enough to build.
    pub fn new(
        rationals: Vec<BigRational>,
        exponents: Vec<i64>,
        heights: Vec<Height>,
        exponent_bound: f64,
    ) -> Result<Self> {
        let n = rationals.len();
        if n < 2 {
            return Err(Error::domain(format!(
                "a linear form needs n >= 2 terms, got {n}"
            )));
        }
        if exponents.len() != n || heights.len() != n {
            return Err(Error::domain(
                "rationals, exponents and heights differ in length",
            ));
        }
        if rationals.iter().any(Zero::is_zero) {
            return Err(Error::domain("rationals must be nonzero"));
        }
        for (i, (q, h)) in rationals.iter().zip(&heights).enumerate() {
            let needed = ln_naive_height(q);
            let ok = match h {
                Height::Value(a) => {
                    let top = q.numer().magnitude().max(q.denom().magnitude()).clone();
                    a.is_finite()
                        && *a >= std::f64::consts::E
                        && BigUint::from_f64(a.floor()).is_some_and(|f| f >= top)
                }
                Height::Log(l) => l.lo >= needed.lo && l.lo >= 1.0 - f64::EPSILON,
            };
            if !ok {
                return Err(Error::domain(format!(
                    "height {i} is below max(|x|, |y|, e)"
                )));
            }
        }
        let needed_b = exponents
            .iter()
            .map(|b| b.unsigned_abs() as f64)
            .fold(3.0, f64::max);
        if !(exponent_bound >= needed_b) {
            return Err(Error::domain(format!(
                "B = {exponent_bound} is below max(3, |b_i|) = {needed_b}"
            )));
        }
        let input = BoundInput {
            rationals,
            exponents,
            heights,
            exponent_bound,
        };
        if input.product_is_one() == Some(true) {
            return Err(Error::domain("the product of powers equals 1"));
        }
        Ok(input)
    }

    /// Smallest legal data: `A_i = max(|x_i|, |y_i|, e)` and
    /// `B = max(3, |b_i|)`.
    pub fn minimal(rationals: Vec<BigRational>, exponents: Vec<i64>) -> Result<Self> {
        let heights = rationals
            .iter()
            .map(|q| Height::Log(ln_naive_height(q)))
            .collect();
        let b = exponents
            .iter()
            .map(|b| b.unsigned_abs() as f64)
            .fold(3.0, f64::max);
        Self::new(rationals, exponents, heights, b)
    }

    pub fn n(&self) -> usize {
        self.rationals.len()
    }

    pub fn rationals(&self) -> &[BigRational] {
        &self.rationals
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn heights(&self) -> &[Height] {
        &self.heights
    }

    pub fn exponent_bound(&self) -> f64 {
        self.exponent_bound
    }

    /// The exact value of `prod (x_i/y_i)^(b_i)`, if its size is manageable.
    pub fn product(&self) -> Option<BigRational> {
        let bits: u64 = self
            .rationals
            .iter()
            .zip(&self.exponents)
            .map(|(q, b)| (q.numer().bits() + q.denom().bits()).saturating_mul(b.unsigned_abs()))
            .fold(0u64, u64::saturating_add);
        if bits > EXACT_PRODUCT_BITS {
            return None;
        }
        let mut acc = BigRational::one();
        for (q, &b) in self.rationals.iter().zip(&self.exponents) {
            let e = i32::try_from(b).ok()?;
            acc *= num_traits::pow::Pow::pow(q, e);
        }
        Some(acc)
    }

    fn product_is_one(&self) -> Option<bool> {
        self.product().map(|p| p.is_one())
    }

    fn ln_height_product(&self) -> Interval {
        self.heights
            .iter()
            .fold(Interval::point(1.0), |acc, h| acc.mul(h.ln()))
    }
}

fn int_power(base: Interval, exp: u32) -> Interval {
    (0..exp).fold(Interval::point(1.0), |acc, _| acc.mul(base))
}

/// `n^(9/2)` and similar: `n^whole * sqrt(n)`.
fn half_power(n: f64, whole: u32) -> Interval {
    int_power(Interval::point(n), whole).mul(Interval::point(n).sqrt())
}

/// Enclosure of `8 * 30^(n+3) * n^(9/2) * log(eB) * prod log A_i`.
fn matveev_enclosure(input: &BoundInput) -> Interval {
    let n = input.n() as u32;
    let ln_eb = e_interval().mul(Interval::point(input.exponent_bound)).ln();
    Interval::point(8.0)
        .mul(int_power(Interval::point(30.0), n + 3))
        .mul(half_power(n as f64, 4))
        .mul(ln_eb)
        .mul(input.ln_height_product())
}

/// `-8 * 30^(n+3) * n^(9/2) * log(eB) * prod log A_i`, rounded down. The
/// logarithm of `|prod (x_i/y_i)^(b_i) - 1|` is strictly larger.
pub fn matveev_lower_bound(input: &BoundInput) -> f64 {
    -matveev_enclosure(input).hi
}

/// `(16e)^(2(n+1)) * n^(5/2) * log(2n)^2 * p/log(p)^2 * prod log A_i * log B`,
/// rounded up. The `p`-adic valuation of `prod (x_i/y_i)^(b_i) - 1` is
/// strictly smaller.
pub fn yu_valuation_bound(input: &BoundInput, p: u64) -> Result<f64> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let n = input.n() as u32;
    let sixteen_e = Interval::point(16.0).mul(e_interval());
    let ln_2n = Interval::point(2.0 * n as f64).ln();
    let ln_p = Interval::point(p as f64).ln();
    let value = int_power(sixteen_e, 2 * (n + 1))
        .mul(half_power(n as f64, 2))
        .mul(ln_2n.mul(ln_2n))
        .mul(Interval::point(p as f64).div(ln_p.mul(ln_p)))
        .mul(input.ln_height_product())
        .mul(Interval::point(input.exponent_bound).ln());
    Ok(value.hi)
}

/// Enclosure of `log |z|` for a nonzero rational.
pub fn ln_abs_rational(z: &BigRational) -> Interval {
    assert!(!z.is_zero(), "logarithm of zero");
    ln_big(z.numer().magnitude()).sub(ln_big(z.denom().magnitude()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn example() -> BoundInput {
        BoundInput::new(
            vec![q(2, 1), q(3, 1)],
            vec![1, 1],
            vec![Height::Value(std::f64::consts::E), Height::Value(3.0)],
            3.0,
        )
        .unwrap()
    }

    #[test]
    fn matveev_example_value() {
        let m = matveev_lower_bound(&example());
        // 8 * 30^5 * 2^4.5 * (1 + ln 3) * ln 3
        let expected = -10_141_633_344.756_238;
        assert!(m <= expected);
        assert!((m - expected).abs() / expected.abs() < 1e-12);
    }

    #[test]
    fn yu_example_value() {
        let y = yu_valuation_bound(&example(), 2).unwrap();
        let expected = 369_692_524_321.156_07;
        assert!(y >= expected);
        assert!((y - expected).abs() / expected < 1e-12);
        assert!(yu_valuation_bound(&example(), 4).is_err());
    }

    #[test]
    fn matveev_scaling_in_b() {
        let base = example();
        let doubled = BoundInput::new(
            base.rationals().to_vec(),
            vec![1, 1],
            base.heights().to_vec(),
            6.0,
        )
        .unwrap();
        let e = std::f64::consts::E;
        let ratio = matveev_lower_bound(&doubled) / matveev_lower_bound(&base);
        let expected = (2.0 * e * 3.0).ln() / (e * 3.0).ln();
        assert!((ratio - expected).abs() < 1e-12);
    }

    #[test]
    fn larger_heights_lower_the_bound() {
        let bigger = BoundInput::new(
            vec![q(2, 1), q(3, 1)],
            vec![1, 1],
            vec![Height::Value(std::f64::consts::E), Height::Value(4.0)],
            3.0,
        )
        .unwrap();
        assert!(matveev_lower_bound(&bigger) < matveev_lower_bound(&example()));
    }

    #[test]
    fn input_validation() {
        let e = std::f64::consts::E;
        assert!(BoundInput::new(vec![q(2, 1)], vec![1], vec![Height::Value(e)], 3.0).is_err());
        // height below |x|
        assert!(BoundInput::new(
            vec![q(5, 1), q(3, 1)],
            vec![1, 1],
            vec![Height::Value(4.0), Height::Value(3.0)],
            3.0
        )
        .is_err());
        // B below |b_i|
        assert!(BoundInput::new(
            vec![q(2, 1), q(3, 1)],
            vec![5, 1],
            vec![Height::Value(e), Height::Value(3.0)],
            4.0
        )
        .is_err());
        // 4^1 * 2^-2 = 1
        assert!(BoundInput::minimal(vec![q(4, 1), q(2, 1)], vec![1, -2]).is_err());
        assert!(BoundInput::minimal(vec![q(4, 1), q(0, 1)], vec![1, 1]).is_err());
        let m = BoundInput::minimal(vec![q(7, 2), q(3, 5)], vec![3, -20]).unwrap();
        assert_eq!(m.exponent_bound(), 20.0);
    }
}
