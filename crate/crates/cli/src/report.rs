//! Report schema. Floats are written with 17 significant digits and keys in
//! declaration order, so parsing a report and writing it again reproduces
//! the input byte for byte.

use std::fmt;

use approxmono::{CheckReport, Witness};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

/// `f64` serialized as `{:.16e}`; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Box<RawValue> = Deserialize::deserialize(d)?;
        match raw.get() {
            "null" => Ok(Real(f64::NAN)),
            text => text.parse().map(Real).map_err(|_| D::Error::custom(format!("bad number {text}"))),
        }
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real(v)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub rule: String,
    pub initial_subdivisions: u64,
    pub tolerance: Real,
    pub max_refinements: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub suite: String,
    pub function: Option<String>,
    pub error: String,
    pub interval: [Real; 2],
    pub grid_n: u64,
    pub tolerance: Real,
    pub quad: QuadConfig,
    pub xy: Option<[Real; 2]>,
    pub point: Option<Real>,
    pub variant: String,
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub x: Real,
    pub y: Real,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mid: Option<Real>,
    pub slack: Real,
}

impl From<Witness> for WitnessEntry {
    fn from(w: Witness) -> Self {
        WitnessEntry { x: w.x.into(), y: w.y.into(), mid: w.mid.map(Real), slack: w.slack.into() }
    }
}

/// Provenance of a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Details {
    pub pairs_checked: u64,
    pub tolerance: Real,
    pub grid_n: u64,
    pub quad_rule: String,
    pub quad_tolerance: Real,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<Parameter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub value: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    /// The statement the check verifies.
    pub paper_ref: String,
    pub verdict: String,
    pub worst_margin: Real,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEntry>,
    pub details: Details,
}

impl CheckEntry {
    pub fn from_report(id: &str, statement: &str, rep: &CheckReport, details: Details) -> Self {
        CheckEntry {
            id: id.to_owned(),
            paper_ref: statement.to_owned(),
            verdict: rep.verdict.as_str().to_owned(),
            worst_margin: rep.worst_margin.into(),
            witness: rep.witness.map(Into::into),
            details,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == "holds"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub id: String,
    pub paper_ref: String,
    pub kind: String,
    pub bound_value: Real,
    pub achieved_value: Real,
    pub gap: Real,
    pub tolerance: Real,
    pub sharp: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_function: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ConfigEcho,
    pub checks: Vec<CheckEntry>,
    pub certificates: Vec<CertificateEntry>,
}

impl Report {
    /// Whether every check holds and every certificate is sharp.
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(CheckEntry::holds) && self.certificates.iter().all(|c| c.sharp)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn real_formatting() {
        assert_eq!(serde_json::to_string(&Real(0.5)).unwrap(), "5.0000000000000000e-1");
        assert_eq!(serde_json::to_string(&Real(f64::INFINITY)).unwrap(), "null");
        let back: Real = serde_json::from_str("null").unwrap();
        assert!(back.0.is_nan());
        let back: Real = serde_json::from_str("1e3").unwrap();
        assert_eq!(back.0, 1000.0);
    }

    proptest! {
        #[test]
        fn real_roundtrips_exactly(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let text = serde_json::to_string(&Real(v)).unwrap();
            let back: Real = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.0.to_bits(), v.to_bits());
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
    }
}
