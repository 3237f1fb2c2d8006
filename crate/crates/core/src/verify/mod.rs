//! Seeded verification suites that regenerate every reproduced number and
//! inequality as a machine-readable report.

mod suites;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use suites::isotropic_ppt_trace;

/// Where a case's target comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    /// A number or inequality stated in the source material.
    Paper,
    /// Follows immediately from the definitions.
    Trivial,
    /// Computed by an independent oracle.
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Pass,
    Fail,
}

fn ser_num<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn de_num<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| serde::de::Error::custom("number out of range")),
        serde_json::Value::String(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            _ => Err(serde::de::Error::custom(format!("invalid number {s:?}"))),
        },
        other => Err(serde::de::Error::custom(format!("invalid number {other}"))),
    }
}

/// One checked value. `margin = target - observed`; for `<=` a case passes
/// when `margin >= -tolerance`, for `>=` when `margin <= tolerance`, and for
/// `==` when `|margin| <= tolerance`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub status: CaseStatus,
    #[serde(serialize_with = "ser_num", deserialize_with = "de_num")]
    pub observed: f64,
    pub relation: Relation,
    #[serde(serialize_with = "ser_num", deserialize_with = "de_num")]
    pub target: f64,
    pub tolerance: f64,
    #[serde(serialize_with = "ser_num", deserialize_with = "de_num")]
    pub margin: f64,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Case {
    pub fn new(name: impl Into<String>, observed: f64, relation: Relation, target: f64, tolerance: f64, provenance: Provenance) -> Self {
        let margin = target - observed;
        let ok = match relation {
            Relation::AtMost => margin >= -tolerance || (target.is_infinite() && target > 0.0),
            Relation::AtLeast => margin <= tolerance || (target.is_infinite() && target < 0.0),
            Relation::Equal => margin.abs() <= tolerance || observed == target,
        };
        Self {
            name: name.into(),
            status: if ok { CaseStatus::Pass } else { CaseStatus::Fail },
            observed,
            relation,
            target,
            tolerance,
            margin,
            provenance,
            note: None,
        }
    }

    /// Records a computation error as a failed case.
    pub fn errored(name: impl Into<String>, relation: Relation, target: f64, provenance: Provenance, err: &Error) -> Self {
        let mut c = Self::new(name, f64::NAN, relation, target, 0.0, provenance);
        c.status = CaseStatus::Fail;
        c.note = Some(err.to_string());
        c
    }

    pub fn from_result(
        name: impl Into<String>,
        observed: Result<f64>,
        relation: Relation,
        target: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        match observed {
            Ok(v) => Self::new(name, v, relation, target, tolerance, provenance),
            Err(e) => Self::errored(name, relation, target, provenance, &e),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CaseStatus::Pass
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<Case>,
}

impl VerificationReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.cases.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.passed())
    }

    pub fn summary(&self) -> String {
        format!(
            "suite {} (seed {}): {}/{} passed",
            self.suite,
            self.seed,
            self.passed(),
            self.cases.len()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Dpt,
    Dpi,
    DmaxAdditivity,
    Nonlock,
    Privacy,
    Flower,
    Pbit,
    Appendix,
    SdpXval,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Dpt,
        Suite::Dpi,
        Suite::DmaxAdditivity,
        Suite::Nonlock,
        Suite::Privacy,
        Suite::Flower,
        Suite::Pbit,
        Suite::Appendix,
        Suite::SdpXval,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Dpt => "dpt",
            Suite::Dpi => "dpi",
            Suite::DmaxAdditivity => "dmax-additivity",
            Suite::Nonlock => "nonlock",
            Suite::Privacy => "privacy",
            Suite::Flower => "flower",
            Suite::Pbit => "pbit",
            Suite::Appendix => "appendix",
            Suite::SdpXval => "sdp-xval",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Runs one suite. Failures are recorded as cases; the suite always completes.
pub fn run_suite(suite: Suite, seed: u64) -> VerificationReport {
    let cases = match suite {
        Suite::Dpt => suites::dpt(seed),
        Suite::Dpi => suites::dpi(seed),
        Suite::DmaxAdditivity => suites::dmax_additivity(seed),
        Suite::Nonlock => suites::nonlock(seed),
        Suite::Privacy => suites::privacy(seed),
        Suite::Flower => suites::flower(),
        Suite::Pbit => suites::pbit(),
        Suite::Appendix => suites::appendix(),
        Suite::SdpXval => suites::sdp_xval(seed),
    };
    VerificationReport {
        suite: suite.name().to_string(),
        seed,
        cases,
    }
}

/// Runs a suite by name; `"all"` runs [`reproduce_all`].
pub fn run_named(name: &str, seed: u64) -> Result<VerificationReport> {
    if name == "all" {
        return Ok(reproduce_all(seed));
    }
    Ok(run_suite(name.parse()?, seed))
}

/// Every suite in order, with case names prefixed by their suite.
pub fn reproduce_all(seed: u64) -> VerificationReport {
    let mut cases = Vec::new();
    for suite in Suite::ALL {
        for mut c in run_suite(suite, seed).cases {
            c.name = format!("{}/{}", suite.name(), c.name);
            cases.push(c);
        }
    }
    VerificationReport {
        suite: "all".into(),
        seed,
        cases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins_and_status() {
        let c = Case::new("le", 1.0, Relation::AtMost, 2.0, 0.0, Provenance::Trivial);
        assert!(c.passed() && c.margin == 1.0);
        let c = Case::new("ge", 1.0, Relation::AtLeast, 2.0, 1e-9, Provenance::Trivial);
        assert!(!c.passed() && c.margin == 1.0);
        let c = Case::new("eq", 1.0 + 1e-10, Relation::Equal, 1.0, 1e-9, Provenance::Trivial);
        assert!(c.passed());
        let c = Case::new("inf", f64::INFINITY, Relation::AtMost, f64::INFINITY, 0.0, Provenance::Trivial);
        assert!(c.passed());
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["observed"], "inf");
        assert_eq!(v["provenance"], "TRIVIAL");
        assert_eq!(v["relation"], "<=");
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("bogus".parse::<Suite>(), Err(Error::UnknownSuite(_))));
        assert!(run_named("bogus", 1).is_err());
    }
}
