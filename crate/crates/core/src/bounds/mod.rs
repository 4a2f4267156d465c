//! Explicit bounds: linear forms in logarithms, the traced two-branch
//! argument on concrete integers, and threshold functions.

pub mod linear_forms;
pub mod thresholds;
pub mod trace;

pub use linear_forms::{matveev_lower_bound, yu_valuation_bound, BoundInput, Height};
pub use thresholds::{
    budget_gpf_threshold, cyclotomic_c_min, cyclotomic_smoothness_check, power_sum_gpf_threshold,
    psi, s_unit_digit_threshold, smooth_digit_check, sparse_gpf_threshold, stewart_bound,
    SmoothDigitRow, Threshold, ThresholdParams,
};
pub use trace::{
    digit_prime_gap, ell_select, gap_constants, top_exponent_bound, trace, Branch, GapConstants,
    GapReport, InequalityRow, TopExponentBound, TraceReport,
};
