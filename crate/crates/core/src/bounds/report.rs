//! Named bound values with their direction and provenance.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::linalg::MatrixJson;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Formula,
    Sdp,
    FixedSigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relaxation {
    Ppt,
}

/// The quantity a report bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    /// Two-way assisted quantum capacity.
    #[serde(rename = "Q_two_way")]
    QTwoWay,
    /// Two-way assisted private capacity.
    #[serde(rename = "P_two_way")]
    PTwoWay,
    /// Private capacity through a repeater station.
    #[serde(rename = "P_repeater")]
    PRepeater,
    #[serde(rename = "E_max")]
    EMax,
    #[serde(rename = "B_max")]
    BMax,
    #[serde(rename = "E_sq")]
    ESq,
    #[serde(rename = "E_R")]
    ER,
    #[serde(rename = "diamond_norm")]
    DiamondNorm,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        write!(f, "{}", v.as_str().unwrap_or_default())
    }
}

fn ser_bits<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() && *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn de_bits<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    match Value::deserialize(d)? {
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::Number(n) => n.as_f64().ok_or_else(|| serde::de::Error::custom("bits out of range")),
        other => Err(serde::de::Error::custom(format!("invalid bits value {other}"))),
    }
}

/// `{"bound", "targets", "direction", "bits", "method", "relaxation", "diagnostics"}`
/// plus an optional certificate matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: String,
    pub targets: Target,
    pub direction: Direction,
    /// Value in bits; `+inf` serializes as `"inf"`.
    #[serde(serialize_with = "ser_bits", deserialize_with = "de_bits")]
    pub bits: f64,
    pub method: Method,
    pub relaxation: Option<Relaxation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<MatrixJson>,
    #[serde(default)]
    pub diagnostics: Map<String, Value>,
}

impl BoundReport {
    pub fn new(bound: &str, targets: Target, direction: Direction, bits: f64, method: Method) -> Self {
        Self {
            bound: bound.to_string(),
            targets,
            direction,
            bits,
            method,
            relaxation: None,
            certificate: None,
            diagnostics: Map::new(),
        }
    }

    pub fn relaxed(mut self, r: Relaxation) -> Self {
        self.relaxation = Some(r);
        self
    }

    pub fn with_certificate(mut self, m: MatrixJson) -> Self {
        self.certificate = Some(m);
        self
    }

    pub fn diag(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.diagnostics.insert(key.to_string(), value.into());
        self
    }

    pub fn diag_f64(&self, key: &str) -> Option<f64> {
        self.diagnostics.get(key).and_then(Value::as_f64)
    }

    /// Columns of the flat CSV form, in order.
    pub const CSV_HEADER: &'static str = "bound,targets,direction,bits,method,relaxation";

    pub fn csv_row(&self) -> String {
        let enum_str = |v: Value| v.as_str().unwrap_or_default().to_string();
        let bits = if self.bits.is_infinite() {
            "inf".to_string()
        } else {
            format!("{:.12e}", self.bits)
        };
        format!(
            "{},{},{},{},{},{}",
            self.bound,
            self.targets,
            enum_str(serde_json::to_value(self.direction).unwrap_or_default()),
            bits,
            enum_str(serde_json::to_value(self.method).unwrap_or_default()),
            self.relaxation.map(|_| "ppt").unwrap_or(""),
        )
    }
}
