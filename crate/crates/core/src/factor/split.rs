//! Finding one nontrivial divisor of a composite: Pollard-Brent rho at three
//! word sizes and Pollard p-1 stage one for multi-word integers.
//!
//! Every routine draws from a shared effort counter (one unit per modular
//! multiplication) and gives up with `None` once it is exhausted.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::arith::{gcd_u128, gcd_u64, Mont128, Mont64};
use super::primality::small_primes;

const BATCH: u64 = 128;

fn charge(effort: &mut u64, units: u64) -> bool {
    if *effort < units {
        *effort = 0;
        false
    } else {
        *effort -= units;
        true
    }
}

pub(crate) fn rho_u64(n: u64, effort: &mut u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let m = Mont64::new(n);
    for c in 1..u64::MAX {
        let c = m.to_mont(c);
        let f = |y: u64| m.add(m.mul(y, y), c);
        let mut y = m.to_mont(2);
        let mut r = 1u64;
        let mut q = m.one();
        let mut x;
        let mut ys = y;
        let mut g = 1u64;
        while g == 1 {
            x = y;
            if !charge(effort, r) {
                return None;
            }
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                if !charge(effort, 2 * steps) {
                    return None;
                }
                for _ in 0..steps {
                    y = f(y);
                    q = m.mul(q, m.sub(x, y));
                }
                g = gcd_u64(m.from_mont(q), n);
                k += steps;
            }
            r *= 2;
            if g == n {
                // the batch overshot; step through it one term at a time
                g = 1;
                let x_fixed = x;
                while g == 1 {
                    if !charge(effort, 1) {
                        return None;
                    }
                    ys = f(ys);
                    g = gcd_u64(m.from_mont(m.sub(x_fixed, ys)), n);
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

pub(crate) fn rho_u128(n: u128, effort: &mut u64) -> Option<u128> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let m = Mont128::new(n);
    for c in 1..u64::MAX {
        let c = m.to_mont(c as u128);
        let f = |y: u128| m.add(m.mul(y, y), c);
        let mut y = m.to_mont(2);
        let mut r = 1u64;
        let mut q = m.one();
        let mut x;
        let mut ys = y;
        let mut g = 1u128;
        while g == 1 {
            x = y;
            if !charge(effort, r) {
                return None;
            }
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                if !charge(effort, 2 * steps) {
                    return None;
                }
                for _ in 0..steps {
                    y = f(y);
                    q = m.mul(q, m.sub(x, y));
                }
                g = gcd_u128(m.from_mont(q), n);
                k += steps;
            }
            r *= 2;
            if g == n {
                g = 1;
                let x_fixed = x;
                while g == 1 {
                    if !charge(effort, 1) {
                        return None;
                    }
                    ys = f(ys);
                    g = gcd_u128(m.from_mont(m.sub(x_fixed, ys)), n);
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

pub(crate) fn rho_big(n: &BigUint, effort: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let diff = |a: &BigUint, b: &BigUint| if a >= b { a - b } else { b - a };
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |y: &BigUint| (y * y + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut x;
        let mut ys = y.clone();
        let mut g = BigUint::one();
        while g.is_one() {
            x = y.clone();
            if !charge(effort, r) {
                return None;
            }
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                if !charge(effort, 2 * steps) {
                    return None;
                }
                for _ in 0..steps {
                    y = f(&y);
                    q = (q * diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
            if &g == n {
                g = BigUint::one();
                while g.is_one() {
                    if !charge(effort, 1) {
                        return None;
                    }
                    ys = f(&ys);
                    g = diff(&x, &ys).gcd(n);
                }
            }
        }
        if &g != n && !g.is_zero() {
            return Some(g);
        }
    }
    None
}

/// Stage-one smoothness bound for p-1.
pub(crate) const P_MINUS_ONE_BOUND: u32 = 5000;

/// Pollard p-1 stage one with bound [`P_MINUS_ONE_BOUND`]. Finds `p | n`
/// whenever `p - 1` is built from prime powers not exceeding the bound.
pub(crate) fn p_minus_one(n: &BigUint, effort: &mut u64) -> Option<BigUint> {
    // base 2 has tiny order modulo Mersenne and Fermat factors
    let mut a = BigUint::from(3u32);
    let primes = small_primes()
        .iter()
        .copied()
        .take_while(|&p| p <= P_MINUS_ONE_BOUND);
    let mut chunk = BigUint::one();
    let mut chunk_len = 0;
    let flush = |a: &mut BigUint, chunk: &BigUint, effort: &mut u64| -> Option<Option<BigUint>> {
        if !charge(effort, chunk.bits()) {
            return None;
        }
        *a = a.modpow(chunk, n);
        let g = (&*a + n - 1u32).gcd(n);
        if g.is_one() {
            Some(None)
        } else if &g == n {
            // all factors found at once; p-1 cannot separate them
            None
        } else {
            Some(Some(g))
        }
    };
    for p in primes {
        let mut power = p as u64;
        while power * (p as u64) <= P_MINUS_ONE_BOUND as u64 {
            power *= p as u64;
        }
        chunk *= power;
        chunk_len += 1;
        if chunk_len == 64 {
            match flush(&mut a, &chunk, effort)? {
                Some(g) => return Some(g),
                None => {
                    chunk = BigUint::one();
                    chunk_len = 0;
                }
            }
        }
    }
    if chunk_len > 0 {
        return flush(&mut a, &chunk, effort)?;
    }
    None
}
