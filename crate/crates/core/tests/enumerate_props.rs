use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use smoothdigits::digits::{decompose, nz_count};
use smoothdigits::enumerate::{
    power_sum_sequence, smooth_sequence, sparse_sequence, PowerSumSpec, SparseSpec,
};
use smoothdigits::factor::{is_s_unit, PrimeSet};

fn sparse_prefix(b: u64, k: u32, count: usize) -> Vec<BigUint> {
    sparse_sequence(&SparseSpec::fixed(b, k).unwrap())
        .unwrap()
        .take(count)
        .collect()
}

#[test]
fn sparse_streams_strictly_increase_for_ten_thousand_terms() {
    for (b, k) in [(2, 2), (2, 3), (3, 3), (10, 2), (10, 4)] {
        let terms = sparse_prefix(b, k, 10_000);
        assert_eq!(terms.len(), 10_000);
        assert!(terms.windows(2).all(|w| w[0] < w[1]), "b = {b}, k = {k}");
    }
}

#[test]
fn top_exponents_never_decrease() {
    for (b, k) in [(2, 3), (3, 4), (10, 3)] {
        let tops: Vec<u64> = sparse_prefix(b, k, 3000)
            .iter()
            .map(|n| decompose(n, b).unwrap().top_exponent())
            .collect();
        assert!(tops.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn power_sums_match_brute_force() {
    let limit = 1_000_000u64;
    for bases in [vec![2u64, 3], vec![2, 2], vec![1, 5], vec![4, 6, 10]] {
        let mut oracle: Vec<u64> = vec![0];
        for &a in &bases {
            let mut next = Vec::new();
            for s in &oracle {
                let mut p = a;
                while s + p < limit {
                    next.push(s + p);
                    if a == 1 {
                        break;
                    }
                    p *= a;
                }
            }
            oracle = next;
        }
        let mut oracle: Vec<u64> = oracle
            .into_iter()
            .map(|s| s + 1)
            .filter(|v| *v <= limit)
            .collect();
        oracle.sort_unstable();
        oracle.dedup();
        let spec = PowerSumSpec::new(bases.clone(), false).unwrap();
        let got: Vec<u64> = power_sum_sequence(&spec)
            .map(|v| v.to_u64().unwrap())
            .take_while(|v| *v <= limit)
            .collect();
        assert_eq!(got, oracle, "bases {bases:?}");
    }
}

#[test]
fn power_sums_with_shared_divisor_are_one_mod_gcd() {
    let spec = PowerSumSpec::new(vec![6, 10, 4], true).unwrap();
    let g = spec.gcd();
    assert_eq!(g, 2);
    let values: Vec<BigUint> = power_sum_sequence(&spec).take(10_000).collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!(values.iter().all(|v| v % g == BigUint::from(1u32)));
    assert!(PowerSumSpec::new(vec![2, 3], true).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sparse_prefix_matches_filter(b in 2u64..12, k in 2u32..5) {
        let cap = BigUint::from(1_000_000u32);
        let terms: Vec<BigUint> = sparse_prefix(b, k, 200).into_iter().take_while(|v| *v <= cap).collect();
        let last = terms.last().unwrap().to_u64().unwrap();
        let oracle: Vec<u64> = (1..=last)
            .filter(|n| n % b != 0 && nz_count(&BigUint::from(*n), b) <= k as usize)
            .collect();
        let got: Vec<u64> = terms.iter().map(|v| v.to_u64().unwrap()).collect();
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn smooth_members_are_s_units(
        primes in proptest::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13, 97, 65_537], 1..5),
        limit in 1u64..5_000_000,
    ) {
        let s = PrimeSet::new(primes.clone()).unwrap();
        let got: Vec<BigUint> = smooth_sequence(&s, BigUint::from(limit)).collect();
        prop_assert!(got.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(got.iter().all(|v| is_s_unit(v, &s) && *v <= BigUint::from(limit)));
        // brute-force count over a prefix
        let small = limit.min(20_000);
        let count = (1..=small)
            .filter(|n| {
                let mut m = *n;
                for p in &primes {
                    while m % p == 0 { m /= p; }
                }
                m == 1
            })
            .count();
        prop_assert_eq!(got.iter().filter(|v| **v <= BigUint::from(small)).count(), count);
    }
}
