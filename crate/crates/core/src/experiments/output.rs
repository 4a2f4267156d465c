//! Serialization shared by the experiment streams: JSON-lines behind a
//! schema header, flat CSV, and a one-line text form.

use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::bounds::Threshold;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest integer every JSON consumer reads exactly.
const SAFE_INTEGER: u64 = (1 << 53) - 1;

/// Integers up to `2^53 - 1` as JSON numbers, larger ones as decimal strings.
pub fn serialize_big<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) if v <= SAFE_INTEGER => s.serialize_u64(v),
        _ => s.serialize_str(&n.to_string()),
    }
}

pub fn serialize_big_opt<S: Serializer>(n: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(n) => serialize_big(n, s),
        None => s.serialize_none(),
    }
}

struct Big<'a>(&'a BigUint);

impl Serialize for Big<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_big(self.0, s)
    }
}

/// `[[prime, exponent], ...]`.
pub fn serialize_pairs<S: Serializer>(pairs: &[(BigUint, u32)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(pairs.len()))?;
    for (p, e) in pairs {
        seq.serialize_element(&(Big(p), e))?;
    }
    seq.end()
}

/// A record that can be written in every output format.
pub trait Row: Serialize {
    fn csv_header() -> Vec<&'static str>;
    fn csv_fields(&self) -> Vec<String>;
    fn text(&self) -> String;
}

/// Writes `{"schema":1}` once, then one JSON object per line.
pub struct JsonlWriter<W: Write> {
    out: W,
}

impl<W: Write> JsonlWriter<W> {
    pub fn new(mut out: W) -> io::Result<Self> {
        writeln!(out, "{{\"schema\":{SCHEMA_VERSION}}}")?;
        Ok(JsonlWriter { out })
    }

    pub fn write<T: Serialize>(&mut self, record: &T) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// CSV with the header of `T`.
pub struct CsvWriter<W: Write> {
    out: csv::Writer<W>,
}

impl<W: Write> CsvWriter<W> {
    pub fn new<T: Row>(out: W) -> io::Result<Self> {
        let mut out = csv::Writer::from_writer(out);
        out.write_record(T::csv_header())?;
        Ok(CsvWriter { out })
    }

    pub fn write<T: Row>(&mut self, record: &T) -> io::Result<()> {
        self.out.write_record(record.csv_fields())?;
        Ok(())
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// Empty for absent values.
pub fn opt_field<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn threshold_field(t: &Threshold) -> String {
    t.value().map(|v| v.to_string()).unwrap_or_default()
}

/// `p^e*q^f`, or `1` for the empty product.
pub fn pairs_field(pairs: &[(BigUint, u32)]) -> String {
    if pairs.is_empty() {
        return "1".into();
    }
    pairs
        .iter()
        .map(|(p, e)| {
            if *e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}
