//! Miller-Rabin primality testing and the shared small-prime table.
//!
//! Below [`DETERMINISTIC_LIMIT`] the strong test with the first thirteen prime
//! bases is a proof of primality. Above it we run [`PROBABILISTIC_ROUNDS`]
//! rounds: the same thirteen bases plus twelve bases drawn from a seeded
//! generator keyed on the candidate.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::arith::{Mont128, Mont64};

/// Integers below this bound are certified by the fixed-base strong test.
pub const DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// Total Miller-Rabin rounds used above [`DETERMINISTIC_LIMIT`].
pub const PROBABILISTIC_ROUNDS: usize = 25;

const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Primes below this bound are kept in the shared table.
pub const SMALL_PRIME_BOUND: u32 = 1 << 16;

/// Sieved primes below [`SMALL_PRIME_BOUND`], built once and read-only after.
pub fn small_primes() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| sieve(SMALL_PRIME_BOUND))
}

/// Primes below `limit` by the sieve of Eratosthenes.
pub fn sieve(limit: u32) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut primes = Vec::new();
    for i in 2..limit {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j < limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES[..12] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let m = Mont64::new(n);
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    let one = m.one();
    let minus_one = m.to_mont(n - 1);
    'witness: for &a in &WITNESSES[..12] {
        let mut x = m.pow(m.to_mont(a), d);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..d_shift {
            x = m.mul(x, x);
            if x == minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime_u128(m: &Mont128, a: u128) -> bool {
    let n = m.n;
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    let one = m.one();
    let minus_one = m.to_mont(n - 1);
    let mut x = m.pow(m.to_mont(a), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..d_shift {
        x = m.mul(x, x);
        if x == minus_one {
            return true;
        }
    }
    false
}

pub(crate) fn is_prime_u128(n: u128, seed: u64) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p as u128) {
            return false;
        }
    }
    let m = Mont128::new(n);
    if !WITNESSES
        .iter()
        .all(|&a| strong_probable_prime_u128(&m, a as u128))
    {
        return false;
    }
    if n < DETERMINISTIC_LIMIT {
        return true;
    }
    let mut rng = SplitMix::new(seed ^ (n as u64) ^ ((n >> 64) as u64));
    (WITNESSES.len()..PROBABILISTIC_ROUNDS).all(|_| {
        let a = 2 + ((rng.next() as u128) << 64 | rng.next() as u128) % (n - 3);
        strong_probable_prime_u128(&m, a)
    })
}

fn strong_probable_prime_big(
    n: &BigUint,
    n_minus_one: &BigUint,
    d: &BigUint,
    s: u64,
    a: &BigUint,
) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_one {
            return true;
        }
    }
    false
}

fn is_prime_big(n: &BigUint, seed: u64) -> bool {
    if let Some(small) = n.to_u128() {
        return is_prime_u128(small, seed);
    }
    for &p in &small_primes()[..200] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().expect("n > 1");
    let d = &n_minus_one >> s;
    if !WITNESSES
        .iter()
        .all(|&a| strong_probable_prime_big(n, &n_minus_one, &d, s, &BigUint::from(a)))
    {
        return false;
    }
    let mut rng = SplitMix::new(seed ^ n.iter_u64_digits().fold(0u64, |h, w| h.rotate_left(7) ^ w));
    let span = n - 3u32;
    (WITNESSES.len()..PROBABILISTIC_ROUNDS).all(|_| {
        let words: Vec<u64> = (0..n.iter_u64_digits().len()).map(|_| rng.next()).collect();
        let a = BigUint::from_slice(
            &words
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        ) % &span
            + 2u32;
        strong_probable_prime_big(n, &n_minus_one, &d, s, &a)
    })
}

/// Primality test used throughout the crate.
pub fn is_prime(n: &BigUint) -> bool {
    is_prime_big(n, 0)
}

/// Independent re-check with a differently seeded set of random bases.
pub(crate) fn recertify(n: &BigUint) -> bool {
    is_prime_big(n, 0x9e37_79b9_7f4a_7c15)
}

/// SplitMix64; only used to pick Miller-Rabin bases reproducibly.
pub(crate) struct SplitMix(u64);

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn agrees_with_trial_division_below_ten_thousand() {
        for n in 0..10_000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn rejects_strong_pseudoprimes() {
        // strong pseudoprime to bases 2..=37
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        // Carmichael numbers
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_prime_u64(n));
        }
        let psp = BigUint::parse_bytes(b"3317044064679887385961981", 10).unwrap();
        assert!(!is_prime(&psp));
    }

    #[test]
    fn known_large_primes() {
        assert!(is_prime_u64(67_280_421_310_721));
        assert!(is_prime_u64(u64::MAX - 58));
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime(&m127));
        let m521 = (BigUint::one() << 521u32) - 1u32;
        assert!(is_prime(&m521));
        assert!(recertify(&m521));
        let f5 = (BigUint::one() << 32u32) + 1u32;
        assert!(!is_prime(&f5));
    }

    #[test]
    fn sieve_counts() {
        assert_eq!(sieve(100).len(), 25);
        assert_eq!(small_primes().len(), 6542);
    }
}
