//! Serialization of extended reals: finite values as JSON numbers, infinities
//! and NaN as the strings "inf", "-inf", "nan" (JSON has no literal for them).

use serde::Serializer;

pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(label(*v))
    }
}

pub fn label(v: f64) -> &'static str {
    if v.is_nan() {
        "nan"
    } else if v > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

pub mod option {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => super::serialize(x, s),
            None => s.serialize_none(),
        }
    }
}

/// Formats a value for CSV cells.
pub fn csv(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        label(v).to_string()
    }
}
