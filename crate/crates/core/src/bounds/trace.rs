//! The two-branch argument bounding the top exponent `n_k` of an integer
//! `N = d_k b^(n_k) + ... + d_1` with `d_1 != 0` in terms of its prime
//! support, traced on concrete integers.
//!
//! When `k = 2` or `n_k >= 2 n_(k-1)` the form
//! `Lambda_a = N / (d_k b^(n_k)) - 1` is small in absolute value and
//! Matveev's bound applies. Otherwise the low digits split off
//! `D = d_1 + ... + d_l b^(n_l)` and `Lambda_u = N / D - 1` is divisible by a
//! large power of the smallest prime `p | b`, which Yu's bound caps.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::linear_forms::{
    ln_abs_rational, matveev_lower_bound, yu_valuation_bound, BoundInput, Height,
};
use crate::digits::{decompose, size_condition, DigitExpansion};
use crate::error::{Error, Result};
use crate::factor::{p_adic_valuation, smallest_prime_factor, Factorization, PrimeSet};
use crate::numeric::{e_interval, ln2_interval, Interval};

/// Which linear form the argument uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `Lambda_a`, archimedean.
    Archimedean,
    /// `Lambda_u`, p-adic.
    PAdic,
}

/// One inequality of the argument, `lhs (op) rhs`, with whether it holds.
///
/// `holds` is decided exactly where the inequality reduces to integers and
/// otherwise conservatively from enclosures, so `true` is always reliable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityRow {
    pub label: &'static str,
    /// Position in the valuation chain, 1 to 4.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link: Option<u8>,
    pub relation: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Whether the argument only guarantees this row under the size condition.
    pub requires_size_condition: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    pub branch: Branch,
    pub k: usize,
    pub k_star: usize,
    /// `l`, on the p-adic branch.
    pub ell: Option<usize>,
    /// The exact value of the linear form.
    #[serde(serialize_with = "serialize_rational")]
    pub lambda_value: BigRational,
    pub p: Option<u64>,
    /// `v_p(Lambda_u)`, on the p-adic branch.
    pub valuation: Option<i64>,
    pub size_condition: bool,
    pub rows: Vec<InequalityRow>,
}

impl TraceReport {
    /// Whether every row the argument guarantees for this `N` holds.
    pub fn all_required_hold(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| self.size_condition || !r.requires_size_condition)
            .all(|r| r.holds)
    }

    pub fn row(&self, label: &str, link: Option<u8>) -> Option<&InequalityRow> {
        self.rows
            .iter()
            .find(|r| r.label == label && r.link == link)
    }
}

fn serialize_rational<S: serde::Serializer>(
    q: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn big_ratio(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

/// `l` for exponents `n_1 = 0 < n_2 < ... < n_k`, `k >= 3`: the least
/// `j` in `[1, k-3]` with `n_(1+j) >= n_k^(j/(k-2))`, else `k-2`. The
/// comparison is exact, as `n_(1+j)^(k-2) >= n_k^j`.
pub fn ell_select(e: &DigitExpansion) -> Result<usize> {
    let k = e.len();
    if k < 3 {
        return Err(Error::domain(format!(
            "l is defined for k >= 3, got k = {k}"
        )));
    }
    let exps = e.exponents();
    let nk = BigUint::from(exps[k - 1]);
    let km2 = (k - 2) as u32;
    #[allow(clippy::needless_range_loop)]
    for j in 1..=k - 3 {
        if BigUint::from(exps[j]).pow(km2) >= nk.pow(j as u32) {
            return Ok(j);
        }
    }
    Ok(k - 2)
}

fn prime_support(f: &Factorization) -> Vec<(BigUint, u32)> {
    f.pairs().to_vec()
}

/// Traces the argument on `N` with its complete factorization.
pub fn trace(n: &BigUint, b: u64, factorization: &Factorization) -> Result<TraceReport> {
    if !factorization.is_complete() {
        return Err(Error::IncompleteFactorization(format!(
            "trace needs a complete factorization of {n}"
        )));
    }
    if factorization.n() != n || &factorization.product() != n {
        return Err(Error::domain("the factorization does not match N"));
    }
    let e = decompose(n, b)?;
    if e.is_divisible_by_base() {
        return Err(Error::domain(format!("{n} is divisible by the base {b}")));
    }
    let k = e.len();
    if k < 2 {
        return Err(Error::domain(format!("{n} has a single nonzero digit")));
    }
    let exps = e.exponents();
    let nk = exps[k - 1];
    let size = size_condition(n, b, k as u32);
    let k_star = k.saturating_sub(2).max(1);
    if k == 2 || nk >= 2 * exps[k - 2] {
        archimedean(n, b, &e, factorization, size, k_star)
    } else {
        p_adic(n, b, &e, factorization, size, k_star)
    }
}

fn archimedean(
    n: &BigUint,
    b: u64,
    e: &DigitExpansion,
    f: &Factorization,
    size: bool,
    k_star: usize,
) -> Result<TraceReport> {
    let k = e.len();
    let nk = e.top_exponent();
    let dk = e.leading_digit();
    let base = BigUint::from(b);
    let denom = base.pow(nk as u32) * dk;
    let lambda = big_ratio(n, &denom) - BigRational::one();
    let lower = e.partial_value(0..k - 1);
    debug_assert_eq!(lambda, big_ratio(&lower, &denom));

    let ln_b = Interval::point(b as f64).ln();
    let ln_lambda = ln_abs_rational(&lambda);
    let upper_rhs = Interval::point(nk as f64 / 2.0 - 1.0).mul(ln_b).neg();
    // lambda^2 <= b^(2 - n_k)  <=>  lower^2 b^(n_k) <= denom^2 b^2
    let upper_holds = &lower * &lower * base.pow(nk as u32) <= &denom * &denom * &base * &base;

    let pairs = prime_support(f);
    let mut rationals: Vec<BigRational> = pairs
        .iter()
        .map(|(q, _)| BigRational::from_integer(BigInt::from(q.clone())))
        .collect();
    let mut exponents: Vec<i64> = pairs.iter().map(|(_, r)| *r as i64).collect();
    let mut heights: Vec<Height> = pairs.iter().map(|(q, _)| Height::of_integer(q)).collect();
    rationals.push(BigRational::from_integer(BigInt::from(dk)));
    exponents.push(-1);
    heights.push(Height::of_integer(&BigUint::from(dk)));
    rationals.push(BigRational::from_integer(BigInt::from(b)));
    exponents.push(-(nk as i64));
    heights.push(Height::of_integer(&base));
    let bound_b = exponents
        .iter()
        .map(|x| x.unsigned_abs() as f64)
        .fold(3.0, f64::max);
    let input = BoundInput::new(rationals, exponents, heights, bound_b)?;
    let matveev = matveev_lower_bound(&input);

    Ok(TraceReport {
        branch: Branch::Archimedean,
        k,
        k_star,
        ell: None,
        lambda_value: lambda,
        p: None,
        valuation: None,
        size_condition: size,
        rows: vec![
            InequalityRow {
                label: "archimedean_upper",
                link: None,
                relation: "<=",
                lhs: ln_lambda.mid(),
                rhs: upper_rhs.mid(),
                holds: upper_holds,
                requires_size_condition: false,
            },
            InequalityRow {
                label: "archimedean_lower",
                link: None,
                relation: ">",
                lhs: ln_lambda.mid(),
                rhs: matveev,
                holds: ln_lambda.lo > matveev,
                requires_size_condition: false,
            },
        ],
    })
}

/// `log b / log p` for the smallest prime `p | b`: exactly `t` when
/// `b = p^t`, else `None`.
fn exact_log_ratio(b: u64, p: u64) -> Option<u64> {
    let mut rest = b;
    let mut t = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        t += 1;
    }
    (rest == 1).then_some(t)
}

fn p_adic(
    n: &BigUint,
    b: u64,
    e: &DigitExpansion,
    f: &Factorization,
    size: bool,
    k_star: usize,
) -> Result<TraceReport> {
    let k = e.len();
    let exps = e.exponents();
    let ell = ell_select(e)?;
    let d = e.partial_value(0..ell);
    let lambda = big_ratio(n, &d) - BigRational::one();
    debug_assert_eq!(lambda, big_ratio(&e.partial_value(ell..k), &d));
    let p = smallest_prime_factor(b)?;
    let v = p_adic_valuation(&lambda, p)?;

    // n_h is exps[h - 1]
    let n_ell = exps[ell - 1] as f64;
    let n_ell1 = exps[ell];
    let nk = Interval::point(exps[k - 1] as f64);
    let km2 = (k - 2) as f64;
    let power = |num: f64| nk.powf(Interval::point(num).div(Interval::point(km2)));
    let ln_b = Interval::point(b as f64).ln();
    let lambda2 = ln_b.div(ln2_interval());
    let half = Interval::point(0.5);

    let (e1, link1_holds) = match exact_log_ratio(b, p) {
        Some(t) => {
            let exact = n_ell1 as i128 - (1 + exps[ell - 1] as i128) * t as i128;
            (Interval::point(exact as f64), v as i128 >= exact)
        }
        None => {
            let ratio = ln_b.div(Interval::point(p as f64).ln());
            let e1 = Interval::point(n_ell1 as f64).sub(Interval::point(1.0 + n_ell).mul(ratio));
            (e1, v as f64 >= e1.hi)
        }
    };
    let top = power(ell as f64);
    let e2 = half.mul(top).sub(
        Interval::point(1.0)
            .add(power(ell as f64 - 1.0))
            .mul(lambda2),
    );
    let t = power(1.0);
    // E3 = E2 - (n_k^((l-1)/(k-2)) - 1) log b / log 2
    let e3 = e2.sub(
        power(ell as f64 - 1.0)
            .sub(Interval::point(1.0))
            .mul(lambda2),
    );
    let e4 = Interval::point(0.25).mul(top);
    // E3 >= E4  <=>  n_k^(1/(k-2)) >= 8 log b / log 2
    let eight_lambda = Interval::point(8.0).mul(lambda2);
    let link4_holds = t.lo >= eight_lambda.hi;

    let pairs = prime_support(f);
    let mut rationals: Vec<BigRational> = pairs
        .iter()
        .map(|(q, _)| BigRational::from_integer(BigInt::from(q.clone())))
        .collect();
    let mut exponents: Vec<i64> = pairs.iter().map(|(_, r)| *r as i64).collect();
    let mut heights: Vec<Height> = pairs.iter().map(|(q, _)| Height::of_integer(q)).collect();
    rationals.push(BigRational::from_integer(BigInt::from(d.clone())));
    exponents.push(-1);
    heights.push(Height::of_integer(&d));
    let bound_b = exponents
        .iter()
        .map(|x| x.unsigned_abs() as f64)
        .fold(3.0, f64::max);
    let input = BoundInput::new(rationals, exponents, heights, bound_b)?;
    let yu = yu_valuation_bound(&input, p)?;

    let row = |link: u8, lhs: f64, rhs: f64, holds: bool, requires: bool| InequalityRow {
        label: "valuation_lower",
        link: Some(link),
        relation: ">=",
        lhs,
        rhs,
        holds,
        requires_size_condition: requires,
    };
    Ok(TraceReport {
        branch: Branch::PAdic,
        k,
        k_star,
        ell: Some(ell),
        lambda_value: lambda,
        p: Some(p),
        valuation: Some(v),
        size_condition: size,
        rows: vec![
            row(1, v as f64, e1.mid(), link1_holds, false),
            row(2, e1.mid(), e2.mid(), e1.lo >= e2.hi, false),
            // E2 - E3 = (n_k^((l-1)/(k-2)) - 1) log b / log 2 with n_k >= 1
            row(3, e2.mid(), e3.mid(), true, false),
            row(4, e3.mid(), e4.mid(), link4_holds, true),
            InequalityRow {
                label: "valuation_upper",
                link: None,
                relation: "<",
                lhs: v as f64,
                rhs: yu,
                holds: (v as f64) < yu,
                requires_size_condition: false,
            },
        ],
    })
}

/// Upper bound for the top exponent `n_k` of integers with `k` nonzero
/// digits, not divisible by `b`, supported on `S` and meeting the size
/// condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TopExponentBound {
    pub k_star: usize,
    /// Largest `x` with `x <= 2 + (2M / log b) log(e max(3, (x+1) log b / log 2))`.
    pub archimedean: f64,
    /// Largest `t` with `t <= 8 Y max(log b, 1) log max(3, (t^(k-2)+1) log b / log 2)`,
    /// bounding `n_k^(1/(k-2))`; absent for `k = 2`.
    pub p_adic: Option<f64>,
    /// `k* log max(archimedean, p_adic, 8 log b / log 2)`.
    pub ln_bound: f64,
}

impl TopExponentBound {
    /// The bound itself; may be infinite when it exceeds `f64`.
    pub fn value(&self) -> f64 {
        self.ln_bound.exp()
    }
}

/// Largest `x >= 1` with `x <= g(x)`, for `g` increasing and concave in the
/// sense that `x - g(x)` changes sign once. Returns an upper endpoint: the
/// result fails `x <= g(x)`, and every solution lies below it.
fn largest_solution(g: impl Fn(f64) -> f64) -> f64 {
    let mut lo = 1.0;
    assert!(lo <= g(lo), "no solution at 1");
    let mut hi = 2.0;
    while hi <= g(hi) {
        lo = hi;
        hi *= 2.0;
        assert!(hi.is_finite(), "bound exceeds f64 range");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mid <= g(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn product_ln_heights(primes: &[u64]) -> Interval {
    primes.iter().fold(Interval::point(1.0), |acc, &q| {
        acc.mul(Height::of_integer(&BigUint::from(q)).ln())
    })
}

fn power(base: Interval, exp: u32) -> Interval {
    (0..exp).fold(Interval::point(1.0), |acc, _| acc.mul(base))
}

/// Matveev's constant without the `log(eB)` factor for the archimedean form,
/// `n = s + 2`, heights `max(q_i, e)`, `max(b-1, e)`, `max(b, e)`.
fn matveev_constant(b: u64, s: &PrimeSet) -> Interval {
    let n = (s.len() + 2) as u32;
    let nf = Interval::point(n as f64);
    Interval::point(8.0)
        .mul(power(Interval::point(30.0), n + 3))
        .mul(power(nf, 4).mul(nf.sqrt()))
        .mul(product_ln_heights(s.primes()))
        .mul(Height::of_integer(&BigUint::from(b - 1)).ln())
        .mul(Height::of_integer(&BigUint::from(b)).ln())
}

/// Yu's constant without the heights of `D` and `B`, `n = s + 1`.
fn yu_constant(p: u64, s: &PrimeSet) -> Interval {
    let n = (s.len() + 1) as u32;
    let nf = Interval::point(n as f64);
    let ln_2n = Interval::point(2.0 * n as f64).ln();
    let ln_p = Interval::point(p as f64).ln();
    power(Interval::point(16.0).mul(e_interval()), 2 * (n + 1))
        .mul(power(nf, 2).mul(nf.sqrt()))
        .mul(ln_2n.mul(ln_2n))
        .mul(Interval::point(p as f64).div(ln_p.mul(ln_p)))
        .mul(product_ln_heights(s.primes()))
}

/// Explicit bound for `n_k` from both branches of the argument.
///
/// On the archimedean branch `r_i log q_i <= (n_k + 1) log b` gives
/// `B <= max(3, (n_k+1) log b / log 2)`, and comparing the two estimates of
/// `log Lambda_a` leaves `n_k <= archimedean`. On the p-adic branch the final
/// valuation estimate `v_p >= n_k^(l/(k-2)) / 4` against Yu's bound with
/// `log D <= (1 + n_k^((l-1)/(k-2))) log b` leaves `n_k^(1/(k-2)) <= p_adic`.
/// Below `n_k^(1/(k-2)) = 8 log b / log 2` the final estimate is not
/// available, hence that floor.
pub fn top_exponent_bound(b: u64, k: usize, s: &PrimeSet) -> Result<TopExponentBound> {
    if b < 2 {
        return Err(Error::domain(format!("base must be at least 2, got {b}")));
    }
    if k < 2 {
        return Err(Error::domain(format!("k must be at least 2, got {k}")));
    }
    let k_star = k.saturating_sub(2).max(1);
    let ln_b = Interval::point(b as f64).ln();
    let lambda = ln_b.div(ln2_interval());
    let three = Interval::point(3.0);

    let m = matveev_constant(b, s);
    let coeff_a = Interval::point(2.0).mul(m).div(ln_b);
    let archimedean = largest_solution(|x| {
        let big_b = Interval::point(x + 1.0).mul(lambda).max_with(three);
        Interval::point(2.0)
            .add(coeff_a.mul(e_interval().mul(big_b).ln()))
            .hi
    });

    let p_adic = if k >= 3 {
        let p = smallest_prime_factor(b)?;
        let y = yu_constant(p, s);
        let coeff_u = Interval::point(8.0)
            .mul(y)
            .mul(ln_b.max_with(Interval::point(1.0)));
        let km2 = Interval::point((k - 2) as f64);
        let ln_three = three.ln();
        Some(largest_solution(|t| {
            // log((t^(k-2) + 1) lambda) without forming t^(k-2)
            let tt = Interval::point(t);
            let lead = km2.mul(tt.ln());
            let tail = lead.neg().exp().add(Interval::point(1.0)).ln();
            let ln_big_b = lead.add(tail).add(lambda.ln()).max_with(ln_three);
            coeff_u.mul(ln_big_b).hi
        }))
    } else {
        None
    };

    let floor = Interval::point(8.0).mul(lambda).hi;
    let top = p_adic
        .map_or(archimedean, |t| t.max(archimedean))
        .max(floor);
    let ln_bound = Interval::point(k_star as f64)
        .mul(Interval::point(top).ln())
        .hi;
    Ok(TopExponentBound {
        k_star,
        archimedean,
        p_adic,
        ln_bound,
    })
}

/// Default constants `(c, C)` for the digit/prime-gap inequality
///
/// `log log n / k <= c + log k + omega(n) (C + log log P[n]) + log log(k log P[n])`.
///
/// They are closed-form upper bounds for the logarithm of
/// [`top_exponent_bound`], obtained with `y <= g log y, g >= e  =>  y <= 2 g log g`,
/// tangent-line bounds for the logarithmic terms in `s`, and
/// `log log N < log(n_k + 1) + log log b`. The term `c7` covers integers
/// failing the size condition, for which `log log N < k log(8 log b / log 2) + log(2 log b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapConstants {
    pub c: f64,
    #[serde(rename = "C")]
    pub big_c: f64,
}

pub fn gap_constants(b: u64) -> Result<GapConstants> {
    if b < 2 {
        return Err(Error::domain(format!("base must be at least 2, got {b}")));
    }
    let p = smallest_prime_factor(b)? as f64;
    let bf = b as f64;
    let ln2 = std::f64::consts::LN_2;
    let ln_b = bf.ln();
    let lnln_b = ln_b.ln();
    let lambda = ln_b / ln2;
    let ln_height_d = ((bf - 1.0).ln()).max(1.0).ln();
    let ln_height_b = ln_b.max(1.0).ln();
    let ln16e = (16.0 * std::f64::consts::E).ln();
    let lnln4 = (4f64.ln()).ln();
    // log(1 + l') <= log(log k + l') - log log 2 for k >= 2
    let shift_a = -(ln2.ln());
    // log(1 + x) <= log x + xi for x >= log 2 + log log 3
    let xi = (1.0 + 1.0 / (ln2 + 3f64.ln().ln())).ln();
    let tail = (ln2 + lnln_b).max(0.0) / 2.0;

    let c7 = (8.0 * lambda).ln() + (2.0 * ln_b).ln().max(0.0) / 2.0;

    let m0 = 8f64.ln() + 5.0 * 30f64.ln() + 4.5 * 3f64.ln() - 1.5 + ln_height_d + ln_height_b;
    let m1 = 30f64.ln() + 1.5;
    let a0 = ln2 - lnln_b + m0;
    let c_a = ln2 + a0 + (2.0 + lambda.ln() + a0 + m1).ln() + shift_a - 1.0 + tail;
    let big_c_a = m1 + 1.0;

    let y0 =
        4.0 * ln16e + 2.5 * ln2 - 1.25 + 2.0 * lnln4 - 1.0 / 4f64.ln() + (p / p.ln().powi(2)).ln();
    let y1 = 2.0 * ln16e + 1.25 + 1.0 / 4f64.ln();
    let g0 = 8f64.ln() + ln_b.max(1.0).ln() + y0;
    let c_u = ln2 + g0 + (g0 + (3.0 * lambda).ln() + y1).ln() + xi - 1.0 + tail;
    let big_c_u = y1 + 1.0;

    // a few ulps of slack for the rounding of the sums above
    let pad = |x: f64| x + 1e-9 * x.abs().max(1.0);
    Ok(GapConstants {
        c: pad(c7.max(c_a).max(c_u)),
        big_c: pad(big_c_a.max(big_c_u)),
    })
}

/// The two sides of the digit/prime-gap inequality and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; nonnegative when the inequality holds.
    pub gap: f64,
    /// Whether `P < 3` was replaced by 3 so that `log log P` is defined.
    pub p_guarded: bool,
}

/// Evaluates the inequality for `n >= 16` with `k >= 2` nonzero digits,
/// greatest prime factor `P` and `omega` distinct primes.
pub fn digit_prime_gap(
    n: &BigUint,
    k: usize,
    greatest_prime: &BigUint,
    omega: usize,
    constants: GapConstants,
) -> Result<GapReport> {
    if *n < BigUint::from(16u32) {
        return Err(Error::domain("the gap is evaluated for n >= 16"));
    }
    if k < 2 {
        return Err(Error::domain(format!("k must be at least 2, got {k}")));
    }
    let p_guarded = *greatest_prime < BigUint::from(3u32);
    let ln_p = if p_guarded {
        3f64.ln()
    } else {
        crate::numeric::ln_big_approx(greatest_prime)
    };
    let kf = k as f64;
    let lhs = crate::numeric::ln_big_approx(n).ln() / kf;
    let rhs = constants.c
        + kf.ln()
        + omega as f64 * (constants.big_c + ln_p.ln())
        + (kf.ln() + ln_p.ln()).ln();
    Ok(GapReport {
        lhs,
        rhs,
        gap: rhs - lhs,
        p_guarded,
    })
}

/// Whether `N = d_k b^(n_k) (1 + Lambda_a)` reproduces the low digits exactly.
pub fn lambda_matches_digits(report: &TraceReport, e: &DigitExpansion) -> bool {
    if report.branch != Branch::Archimedean {
        return false;
    }
    let k = e.len();
    let denom = BigUint::from(e.base()).pow(e.top_exponent() as u32) * e.leading_digit();
    report.lambda_value == big_ratio(&e.partial_value(0..k - 1), &denom)
        && report.lambda_value.is_positive()
        && report.lambda_value.to_f64().is_some()
}
