//! Floating-point support: outward-rounded intervals, logarithms of big
//! integers and iterated logarithms.
//!
//! Directed rounding is emulated by stepping each result outward with
//! `next_down`/`next_up` rather than switching the FPU rounding mode. The
//! basic operations are correctly rounded, so one step suffices for them; the
//! libm transcendental functions are accurate to within one ulp, and we step
//! them several times.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

const TRANSCENDENTAL_ULPS: u32 = 4;

fn down(mut x: f64, steps: u32) -> f64 {
    for _ in 0..steps {
        x = x.next_down();
    }
    x
}

fn up(mut x: f64, steps: u32) -> f64 {
    for _ in 0..steps {
        x = x.next_up();
    }
    x
}

/// A closed interval `[lo, hi]` guaranteed to contain the exact real value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Encloses a real constant given by its nearest double.
    pub fn around(x: f64) -> Self {
        Interval {
            lo: x.next_down(),
            hi: x.next_up(),
        }
    }

    pub fn add(self, other: Interval) -> Interval {
        Interval::new(down(self.lo + other.lo, 1), up(self.hi + other.hi, 1))
    }

    pub fn sub(self, other: Interval) -> Interval {
        Interval::new(down(self.lo - other.hi, 1), up(self.hi - other.lo, 1))
    }

    pub fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn mul(self, other: Interval) -> Interval {
        let products = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo, 1), up(hi, 1))
    }

    /// Division by an interval that does not contain zero.
    pub fn div(self, other: Interval) -> Interval {
        assert!(
            other.lo > 0.0 || other.hi < 0.0,
            "division by an interval containing zero"
        );
        let quotients = [
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        ];
        let lo = quotients.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = quotients.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo, 1), up(hi, 1))
    }

    /// Natural logarithm of a strictly positive interval.
    pub fn ln(self) -> Interval {
        assert!(self.lo > 0.0, "logarithm of a non-positive interval");
        Interval::new(
            down(self.lo.ln(), TRANSCENDENTAL_ULPS),
            up(self.hi.ln(), TRANSCENDENTAL_ULPS),
        )
    }

    pub fn exp(self) -> Interval {
        Interval::new(
            down(self.lo.exp(), TRANSCENDENTAL_ULPS).max(0.0),
            up(self.hi.exp(), TRANSCENDENTAL_ULPS),
        )
    }

    pub fn sqrt(self) -> Interval {
        assert!(self.lo >= 0.0, "square root of a negative interval");
        Interval::new(down(self.lo.sqrt(), 1), up(self.hi.sqrt(), 1))
    }

    /// `self^exponent` for a strictly positive base, through `exp(e ln x)`.
    pub fn powf(self, exponent: Interval) -> Interval {
        exponent.mul(self.ln()).exp()
    }

    pub fn max_with(self, other: Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Enclosure of the constant e.
pub fn e_interval() -> Interval {
    Interval::around(std::f64::consts::E)
}

/// Enclosure of ln 2.
pub fn ln2_interval() -> Interval {
    Interval::around(std::f64::consts::LN_2)
}

/// Enclosure of `ln n` for a positive big integer.
///
/// Integers beyond the range of `f64` are split as `m * 2^s` with a 64-bit
/// head `m`; the truncated tail changes `ln n` by less than `2^-63`, which is
/// absorbed by the outward steps.
pub fn ln_big(n: &BigUint) -> Interval {
    assert!(n.bits() > 0, "logarithm of zero");
    let bits = n.bits();
    if bits <= 53 {
        let x = n.to_f64().expect("small integer fits in f64");
        return Interval::point(x).ln();
    }
    if bits <= 64 {
        let x = n.to_u64().expect("64-bit integer") as f64;
        return Interval::new(x.next_down(), x.next_up()).ln();
    }
    let shift = bits - 64;
    let head = (n >> shift).to_u64().expect("64-bit head");
    let head_ln = Interval::new(head as f64, (head as f64).next_up()).ln();
    let scaled = ln2_interval().mul(Interval::point(shift as f64));
    let widen = if shift > 0 {
        Interval::new(0.0, f64::EPSILON)
    } else {
        Interval::point(0.0)
    };
    head_ln.add(scaled).add(widen)
}

/// Nearest-double estimate of `ln n`.
pub fn ln_big_approx(n: &BigUint) -> f64 {
    ln_big(n).mid()
}

/// The size of a positive real number, carried as its natural logarithm so
/// that integers far beyond `f64` range can be fed to threshold formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Magnitude {
    ln: f64,
}

impl Magnitude {
    /// Magnitude of a real `u > 0`.
    pub fn of(u: f64) -> Self {
        assert!(u > 0.0, "magnitude of a non-positive number");
        Magnitude { ln: u.ln() }
    }

    pub fn from_ln(ln: f64) -> Self {
        Magnitude { ln }
    }

    pub fn of_big(n: &BigUint) -> Self {
        Magnitude {
            ln: ln_big_approx(n),
        }
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    /// The iterated logarithms `log u, log log u, ...` up to `depth` levels,
    /// or `None` as soon as one of them fails to be positive.
    pub fn iterated_logs(&self, depth: usize) -> Option<Vec<f64>> {
        let mut logs = Vec::with_capacity(depth);
        let mut current = self.ln;
        for level in 0..depth {
            if !(current > 0.0) || !current.is_finite() {
                return None;
            }
            logs.push(current);
            if level + 1 < depth {
                current = current.ln();
            }
        }
        Some(logs)
    }
}

impl From<f64> for Magnitude {
    fn from(u: f64) -> Self {
        Magnitude::of(u)
    }
}

impl From<&BigUint> for Magnitude {
    fn from(n: &BigUint) -> Self {
        Magnitude::of_big(n)
    }
}

impl From<u64> for Magnitude {
    fn from(n: u64) -> Self {
        Magnitude::of(n as f64)
    }
}
