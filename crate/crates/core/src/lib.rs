//! Integers with few nonzero digits in an integer base: enumeration,
//! factorization, explicit linear-forms-in-logarithms bounds and the
//! threshold functions that compare greatest prime factors against digit
//! counts.

// Interval arithmetic uses named methods rather than operator traits, and
// `!(x >= y)` comparisons are deliberate so that NaN is rejected.
#![allow(clippy::should_implement_trait, clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod digits;
pub mod enumerate;
pub mod error;
pub mod experiments;
pub mod factor;
pub mod numeric;

pub use error::{Error, Result};
