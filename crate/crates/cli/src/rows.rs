//! Output records that exist only at the command line.

use num_bigint::BigUint;
use serde::Serialize;

use smoothdigits::bounds::{
    Branch, GapConstants, SmoothDigitRow, Threshold, TopExponentBound, TraceReport,
};
use smoothdigits::experiments::output::{opt_field, serialize_big, threshold_field, Row};

#[derive(Serialize)]
pub struct EnumRow {
    pub index: usize,
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
}

impl Row for EnumRow {
    fn csv_header() -> Vec<&'static str> {
        vec!["index", "value"]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![self.index.to_string(), self.value.to_string()]
    }

    fn text(&self) -> String {
        self.value.to_string()
    }
}

/// A Matveev or Yu bound, with the true value when it is computable.
#[derive(Serialize)]
pub struct LinearFormRow {
    pub kind: &'static str,
    pub terms: usize,
    pub exponent_bound: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// `log |Lambda|` for Matveev, `v_p(Lambda)` for Yu.
    pub actual: Option<f64>,
    pub holds: Option<bool>,
}

impl Row for LinearFormRow {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "kind",
            "terms",
            "exponent_bound",
            "bound",
            "p",
            "actual",
            "holds",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.kind.to_string(),
            self.terms.to_string(),
            self.exponent_bound.to_string(),
            self.bound.to_string(),
            opt_field(&self.p),
            opt_field(&self.actual),
            opt_field(&self.holds),
        ]
    }

    fn text(&self) -> String {
        let what = match self.kind {
            "matveev" => "log|Lambda| >",
            _ => "v_p(Lambda) <",
        };
        let mut line = format!("{what} {}", self.bound);
        if let (Some(a), Some(h)) = (self.actual, self.holds) {
            line.push_str(&format!(
                "  actual {a}  {}",
                if h { "holds" } else { "FAILS" }
            ));
        }
        line
    }
}

#[derive(Serialize)]
pub struct ThresholdRow {
    #[serde(serialize_with = "serialize_big")]
    pub n: BigUint,
    pub k: u32,
    pub epsilon: f64,
    pub sparse_gpf: Threshold,
    pub power_sum_gpf: Threshold,
    pub s_unit_digits: Threshold,
    pub budget: Option<String>,
    pub budget_gpf: Threshold,
    pub cyclotomic_c_min: Threshold,
    pub base: u64,
    pub nz: usize,
    pub smooth_digit: [SmoothDigitRow; 3],
}

impl Row for ThresholdRow {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "n",
            "k",
            "epsilon",
            "sparse_gpf",
            "power_sum_gpf",
            "s_unit_digits",
            "budget",
            "budget_gpf",
            "cyclotomic_c_min",
            "base",
            "nz",
            "smooth_digit_violations",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.k.to_string(),
            self.epsilon.to_string(),
            threshold_field(&self.sparse_gpf),
            threshold_field(&self.power_sum_gpf),
            threshold_field(&self.s_unit_digits),
            opt_field(&self.budget),
            threshold_field(&self.budget_gpf),
            threshold_field(&self.cyclotomic_c_min),
            self.base.to_string(),
            self.nz.to_string(),
            self.smooth_digit
                .iter()
                .filter(|r| r.is_violated())
                .count()
                .to_string(),
        ]
    }

    fn text(&self) -> String {
        let show = |t: &Threshold| t.value().map_or("n/a".to_string(), |v| v.to_string());
        let rows: Vec<String> = self
            .smooth_digit
            .iter()
            .map(|r| match r {
                SmoothDigitRow::Evaluated {
                    smooth, violated, ..
                } => {
                    format!("smooth={smooth} violated={violated}")
                }
                SmoothDigitRow::NotApplicable => "n/a".into(),
            })
            .collect();
        format!(
            "n = {}\n  sparse gpf (k={}): {}\n  power-sum gpf: {}\n  S-unit digits: {}\n  budget gpf: {}\n  cyclotomic c_min: {}\n  smooth/digit rows (base {}, nz {}): {}",
            self.n,
            self.k,
            show(&self.sparse_gpf),
            show(&self.power_sum_gpf),
            show(&self.s_unit_digits),
            show(&self.budget_gpf),
            show(&self.cyclotomic_c_min),
            self.base,
            self.nz,
            rows.join("; ")
        )
    }
}

#[derive(Serialize)]
pub struct GapRow {
    pub base: u64,
    pub k: usize,
    pub primes: Vec<u64>,
    #[serde(flatten)]
    pub constants: GapConstants,
    pub top_exponent: TopExponentBound,
}

impl Row for GapRow {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "base",
            "k",
            "primes",
            "c",
            "C",
            "k_star",
            "archimedean",
            "p_adic",
            "ln_bound",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        let t = &self.top_exponent;
        vec![
            self.base.to_string(),
            self.k.to_string(),
            self.primes
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(";"),
            self.constants.c.to_string(),
            self.constants.big_c.to_string(),
            t.k_star.to_string(),
            t.archimedean.to_string(),
            opt_field(&t.p_adic),
            t.ln_bound.to_string(),
        ]
    }

    fn text(&self) -> String {
        format!(
            "c = {}  C = {}\nlog of the top-exponent bound = {} (archimedean {}, p-adic {})",
            self.constants.c,
            self.constants.big_c,
            self.top_exponent.ln_bound,
            self.top_exponent.archimedean,
            opt_field(&self.top_exponent.p_adic),
        )
    }
}

/// A trace as one JSON record.
#[derive(Serialize)]
pub struct TraceOutput<'a> {
    #[serde(serialize_with = "serialize_big")]
    pub n: BigUint,
    pub base: u64,
    #[serde(flatten)]
    pub report: &'a TraceReport,
}

pub fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Archimedean => "archimedean",
        Branch::PAdic => "p_adic",
    }
}

pub const TRACE_CSV_HEADER: [&str; 14] = [
    "n",
    "branch",
    "k",
    "ell",
    "p",
    "valuation",
    "size_condition",
    "label",
    "link",
    "relation",
    "lhs",
    "rhs",
    "holds",
    "requires_size_condition",
];

/// One CSV line per inequality.
pub fn trace_csv(n: &BigUint, r: &TraceReport) -> Vec<Vec<String>> {
    r.rows
        .iter()
        .map(|row| {
            vec![
                n.to_string(),
                branch_name(r.branch).to_string(),
                r.k.to_string(),
                opt_field(&r.ell),
                opt_field(&r.p),
                opt_field(&r.valuation),
                r.size_condition.to_string(),
                row.label.to_string(),
                opt_field(&row.link),
                row.relation.to_string(),
                row.lhs.to_string(),
                row.rhs.to_string(),
                row.holds.to_string(),
                row.requires_size_condition.to_string(),
            ]
        })
        .collect()
}

pub fn trace_text(n: &BigUint, b: u64, r: &TraceReport) -> String {
    let mut out = format!(
        "N = {n} in base {b}: k = {}, k* = {}, branch {}\n  Lambda = {}\n",
        r.k,
        r.k_star,
        branch_name(r.branch),
        r.lambda_value
    );
    if let (Some(ell), Some(p), Some(v)) = (r.ell, r.p, r.valuation) {
        out.push_str(&format!("  l = {ell}, p = {p}, v_p(Lambda) = {v}\n"));
    }
    out.push_str(&format!("  size condition: {}\n", r.size_condition));
    for row in &r.rows {
        let name = match row.link {
            Some(l) => format!("{} link {l}", row.label),
            None => row.label.to_string(),
        };
        let note = if row.requires_size_condition && !r.size_condition {
            " (not required: size condition fails)"
        } else {
            ""
        };
        out.push_str(&format!(
            "  {name:<24} {:>24} {} {:<24} {}{note}\n",
            row.lhs,
            row.relation,
            row.rhs,
            if row.holds { "holds" } else { "FAILS" }
        ));
    }
    out.push_str(&format!(
        "  all required rows hold: {}",
        r.all_required_hold()
    ));
    out
}
