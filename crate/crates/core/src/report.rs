//! Serialization helpers shared by the report types.

use crate::scalar::{fraction_string, sig17, Scalar};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serializer;

pub(crate) fn biguint_as_string<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn opt_biguint_as_string<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// `"p/q"` and a 17-significant-digit decimal for an exact value.
pub fn exact_columns(v: &BigRational) -> (String, String) {
    (fraction_string(v), sig17(v.to_f64()))
}

/// Writes rows as CSV with a header line. Fields never contain commas.
pub fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
