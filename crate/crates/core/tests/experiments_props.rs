use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use smoothdigits::bounds::Branch;
use smoothdigits::digits::nz_count;
use smoothdigits::enumerate::SparseSpec;
use smoothdigits::experiments::output::JsonlWriter;
use smoothdigits::experiments::{
    cyclotomic_smooth, smooth_sparse_search, sparse_survey, SurveyConfig,
};
use smoothdigits::factor::{is_s_unit, Budget, PrimeSet};

fn survey_jsonl(b: u64, k: u32, count: usize) -> Vec<u8> {
    let mut cfg = SurveyConfig::new(SparseSpec::fixed(b, k).unwrap(), count);
    cfg.budget = Budget::new(1 << 12);
    let mut w = JsonlWriter::new(Vec::new()).unwrap();
    for r in sparse_survey(cfg).unwrap() {
        w.write(&r).unwrap();
    }
    w.into_inner()
}

#[test]
fn surveys_are_deterministic() {
    for (b, k) in [(2, 2), (2, 3), (10, 3)] {
        let first = survey_jsonl(b, k, 150);
        assert_eq!(first, survey_jsonl(b, k, 150));
        assert_eq!(first.iter().filter(|c| **c == b'\n').count(), 151);
    }
}

#[test]
fn binary_two_digit_survey_is_archimedean() {
    let mut cfg = SurveyConfig::new(SparseSpec::fixed(2, 2).unwrap(), 120);
    cfg.budget = Budget::new(1 << 12);
    for r in sparse_survey(cfg).unwrap() {
        let v = &r.value - 1u32;
        assert!(r.value.is_one() || v.count_ones() == 1, "{}", r.value);
        if let Some(t) = &r.trace {
            assert_eq!(t.branch, Branch::Archimedean);
        }
    }
}

#[test]
fn cyclotomic_identity_up_to_200() {
    for n in 1..=200 {
        let r = cyclotomic_smooth(n, Budget::new(1 << 10)).unwrap();
        assert!(r.product_ok, "n = {n}");
        let product: BigUint = r.factors.iter().map(|c| c.value.clone()).product();
        assert_eq!(product, (BigUint::one() << n as u32) + 1u32);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_hits_recheck(
        b in 2u64..17,
        k in 1usize..4,
        primes in proptest::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13], 1..4),
        limit in 1u64..10_000_000,
    ) {
        let s = PrimeSet::new(primes).unwrap();
        let hits = smooth_sparse_search(b, k, &s, &BigUint::from(limit), 0.0).unwrap();
        prop_assert!(hits.first().map(|h| h.value.is_one()).unwrap_or(false));
        for h in &hits {
            prop_assert!(is_s_unit(&h.value, &s));
            prop_assert!(nz_count(&h.value, b) <= k);
            prop_assert_eq!(h.nz, nz_count(&h.value, b));
            prop_assert!((&h.value % b).to_u64() != Some(0));
        }
        prop_assert!(hits.windows(2).all(|w| w[0].value < w[1].value));
    }
}
