//! Montgomery multiplication for odd moduli below 2^64 and 2^128.

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Full 256-bit product of two 128-bit words as `(high, low)`.
pub(crate) fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Montgomery arithmetic modulo an odd `n < 2^64`, with `R = 2^64`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Mont64 {
    pub n: u64,
    inv: u64,
    r2: u64,
}

impl Mont64 {
    pub fn new(n: u64) -> Self {
        debug_assert!(n & 1 == 1 && n > 1);
        // Newton iteration doubles the number of correct low bits each round.
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r1 = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r1 as u128 * r1 as u128) % n as u128) as u64;
        Mont64 { n, inv, r2 }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.inv);
        let mn = m as u128 * self.n as u128;
        let (hi, mn_hi) = ((t >> 64) as u64, (mn >> 64) as u64);
        let (r, borrow) = hi.overflowing_sub(mn_hi);
        if borrow {
            r.wrapping_add(self.n)
        } else {
            r
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.n)
        }
    }

    #[allow(clippy::wrong_self_convention)]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.n, self.r2)
    }

    #[allow(clippy::wrong_self_convention)]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// Montgomery arithmetic modulo an odd `n < 2^128`, with `R = 2^128`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Mont128 {
    pub n: u128,
    inv: u128,
    r2: u128,
}

impl Mont128 {
    pub fn new(n: u128) -> Self {
        debug_assert!(n & 1 == 1 && n > 1);
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r1 = (u128::MAX % n + 1) % n;
        let mut r2 = r1;
        for _ in 0..128 {
            r2 = if r2 >= n - r2 { r2 - (n - r2) } else { r2 + r2 };
        }
        Mont128 { n, inv, r2 }
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.inv);
        let (mn_hi, _) = mul_wide(m, self.n);
        let (r, borrow) = hi.overflowing_sub(mn_hi);
        if borrow {
            r.wrapping_add(self.n)
        } else {
            r
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.n)
        }
    }

    #[allow(clippy::wrong_self_convention)]
    pub fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    #[allow(clippy::wrong_self_convention)]
    pub fn from_mont(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    pub fn one(&self) -> u128 {
        self.to_mont(1)
    }

    pub fn pow(&self, mut base: u128, mut exp: u128) -> u128 {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_product_matches_split_check() {
        let a = u128::MAX;
        let b = u128::MAX - 12345;
        let (hi, lo) = mul_wide(a, b);
        // (2^128 - 1) * b = b * 2^128 - b
        assert_eq!(lo, 0u128.wrapping_sub(b));
        assert_eq!(hi, b - 1);
    }

    #[test]
    fn montgomery_64_agrees_with_plain_reduction() {
        for &n in &[3u64, 101, 1_000_000_007, u64::MAX - 58, (1 << 63) + 1] {
            let m = Mont64::new(n);
            for &(a, b) in &[(2u64, 3u64), (n - 1, n - 1), (12345, 678910)] {
                let expected =
                    ((a as u128 % n as u128) * (b as u128 % n as u128) % n as u128) as u64;
                let got = m.from_mont(m.mul(m.to_mont(a), m.to_mont(b)));
                assert_eq!(got, expected, "n={n} a={a} b={b}");
            }
        }
    }

    #[test]
    fn montgomery_128_agrees_with_u64_embedding() {
        let n = 1_000_000_007u128;
        let m = Mont128::new(n);
        let got = m.from_mont(m.mul(m.to_mont(123_456_789), m.to_mont(987_654_321)));
        assert_eq!(got, 123_456_789u128 * 987_654_321 % n);
        let big = (1u128 << 127) - 1; // Mersenne prime
        let m = Mont128::new(big);
        // Fermat: 3^(p-1) = 1 mod p
        assert_eq!(m.from_mont(m.pow(m.to_mont(3), big - 1)), 1);
    }

    #[test]
    fn binary_gcd() {
        assert_eq!(gcd_u128(0, 5), 5);
        assert_eq!(gcd_u128(48, 180), 12);
        assert_eq!(gcd_u64(17, 4097), 17);
    }
}
