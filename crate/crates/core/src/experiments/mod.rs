//! Batch harnesses joining enumeration, factorization and bounds.

pub mod output;

mod cyclotomic;
mod search;
mod stewart;
mod survey;

pub use cyclotomic::{
    cyclotomic_at_two, cyclotomic_smooth, divisors, CyclotomicFactor, CyclotomicReport,
};
pub use search::{smooth_sparse_search, SearchHit};
pub use stewart::{stewart_survey, StewartRow, StewartSurvey};
pub use survey::{
    sparse_survey, window_minima, Comparison, SparseSurvey, SurveyConfig, SurveyRecord,
    SurveyThresholds, WindowAggregator, WindowMinimum,
};

use num_bigint::BigUint;
use serde::Serialize;

use crate::factor::{s_part, Cofactor, Factorization, PrimeSet};
use output::{opt_field, pairs_field, serialize_big, serialize_big_opt, serialize_pairs, Row};

/// The quantities read off a factorization. `P`, `omega` and `Q` are absent
/// when the budget ran out.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorSummary {
    pub complete: bool,
    #[serde(serialize_with = "serialize_pairs")]
    pub factors: Vec<(BigUint, u32)>,
    /// Unsplit composite part.
    #[serde(serialize_with = "serialize_big_opt")]
    pub cofactor: Option<BigUint>,
    #[serde(rename = "P", serialize_with = "serialize_big_opt")]
    pub greatest_prime: Option<BigUint>,
    pub omega: Option<usize>,
    #[serde(rename = "Q", serialize_with = "serialize_big_opt")]
    pub radical: Option<BigUint>,
}

impl FactorSummary {
    pub fn of(f: &Factorization) -> Self {
        FactorSummary {
            complete: f.is_complete(),
            factors: f.pairs().to_vec(),
            cofactor: match f.cofactor() {
                Cofactor::Complete => None,
                Cofactor::Partial(c) => Some(c.clone()),
            },
            greatest_prime: f.greatest_prime_factor().ok(),
            omega: f.omega().ok(),
            radical: f.radical().ok(),
        }
    }
}

/// Output of a single factorization, with the `S`-part when a prime set is
/// given.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorRow {
    #[serde(serialize_with = "serialize_big")]
    pub n: BigUint,
    #[serde(flatten)]
    pub summary: FactorSummary,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_big_opt"
    )]
    pub s_part: Option<BigUint>,
}

impl FactorRow {
    pub fn new(f: &Factorization, primes: Option<&PrimeSet>) -> Self {
        FactorRow {
            n: f.n().clone(),
            summary: FactorSummary::of(f),
            s_part: primes.map(|s| s_part(f.n(), s)),
        }
    }
}

impl Row for FactorRow {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "n", "complete", "factors", "cofactor", "P", "omega", "Q", "s_part",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        let s = &self.summary;
        vec![
            self.n.to_string(),
            s.complete.to_string(),
            pairs_field(&s.factors),
            opt_field(&s.cofactor),
            opt_field(&s.greatest_prime),
            opt_field(&s.omega),
            opt_field(&s.radical),
            opt_field(&self.s_part),
        ]
    }

    fn text(&self) -> String {
        let s = &self.summary;
        let mut line = format!("{} = {}", self.n, pairs_field(&s.factors));
        match &s.cofactor {
            Some(c) => line.push_str(&format!(" * [{c}] (partial)")),
            None => line.push_str(&format!(
                "  P={} omega={} Q={}",
                opt_field(&s.greatest_prime),
                opt_field(&s.omega),
                opt_field(&s.radical)
            )),
        }
        if let Some(part) = &self.s_part {
            line.push_str(&format!(" S-part={part}"));
        }
        line
    }
}
