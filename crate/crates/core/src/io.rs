//! Text formats for spectra and action results.

use std::fmt::Write as _;

use serde::Serialize;

use crate::spectra::{Rational, SpinStructure, WeightedSpectrum};

/// Shortest decimal that parses back to `x`, in the same notation as the
/// JSON output (exponent form for very large or small magnitudes).
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite float serializes")
    } else {
        x.to_string()
    }
}

pub const SPECTRUM_CSV_HEADER: &str = "eigenvalue,multiplicity_num,multiplicity_den";

/// One row per eigenvalue, ascending; floats in shortest round-trip form.
pub fn spectrum_to_csv(s: &WeightedSpectrum) -> String {
    let mut out = String::with_capacity(32 * (s.len() + 1));
    out.push_str(SPECTRUM_CSV_HEADER);
    out.push('\n');
    for e in s.entries() {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_float(e.value()),
            e.multiplicity.numer(),
            e.multiplicity.denom()
        );
    }
    out
}

#[derive(Serialize)]
struct JsonEntry {
    eigenvalue: f64,
    sign: i64,
    /// λ² = a + b√2
    a: Rational,
    b: Rational,
    multiplicity: Rational,
}

#[derive(Serialize)]
struct JsonSpectrum<'a> {
    descriptor: &'a str,
    lambda_max: f64,
    entries: Vec<JsonEntry>,
}

/// Exact JSON form. Rationals are `[numerator, denominator]` pairs.
pub fn spectrum_to_json(s: &WeightedSpectrum) -> String {
    let doc = JsonSpectrum {
        descriptor: s.descriptor(),
        lambda_max: s.lambda_max(),
        entries: s
            .entries()
            .iter()
            .map(|e| JsonEntry {
                eigenvalue: e.value(),
                sign: e.eigenvalue.sign().as_i64(),
                a: e.eigenvalue.square().a(),
                b: e.eigenvalue.square().b(),
                multiplicity: e.multiplicity,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("spectrum serializes")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActionRecord {
    pub manifold: String,
    pub spin: Option<SpinStructure>,
    pub kind: String,
    pub lambda: f64,
    pub value: f64,
    pub leading_term: f64,
    pub residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{circle_eigenvalues, CircleDirac};

    #[test]
    fn csv_rows() {
        let s = circle_eigenvalues(&CircleDirac::from_ints(1, 1, 2).unwrap(), 2.0).unwrap();
        let csv = spectrum_to_csv(&s);
        assert_eq!(
            csv,
            "eigenvalue,multiplicity_num,multiplicity_den\n-1.5,1,1\n-0.5,1,1\n0.5,1,1\n1.5,1,1\n"
        );
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.8660254037844386, 1.0, -2.2737367544323206e-13, 1e300, 0.1 + 0.2] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_float(-1.5), "-1.5");
    }

    #[test]
    fn json_exact_fields() {
        let s = circle_eigenvalues(&CircleDirac::from_ints(2, 1, 2).unwrap(), 1.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&spectrum_to_json(&s)).unwrap();
        let e = &v["entries"][0];
        assert_eq!(e["eigenvalue"], 0.5);
        assert_eq!(e["a"], serde_json::json!([1, 4]));
        assert_eq!(e["b"], serde_json::json!([0, 1]));
        assert_eq!(e["multiplicity"], serde_json::json!([1, 1]));
    }
}
