//! Structured pass/fail records shared by every verification routine.
//!
//! A [`CaseRecord`] carries the measured quantity, the bound it is checked
//! against and the signed margin (positive means inside the bound). A
//! [`VerificationReport`] is a list of cases plus a summary; it serializes to
//! JSON deterministically (ordered maps, shortest round-trip floats).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `measured <= tolerance`
    AtMost,
    /// `measured >= tolerance`
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub values: BTreeMap<String, Value>,
    pub measured: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub margin: f64,
    pub pass: bool,
}

impl CaseRecord {
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured, tolerance, Relation::AtMost)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured, tolerance, Relation::AtLeast)
    }

    /// A yes/no check, recorded as `measured = 1 or 0 >= 1`.
    pub fn check(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 1.0 } else { 0.0 }, 1.0, Relation::AtLeast)
    }

    /// A quantity that is only reported. It always passes.
    pub fn info(name: impl Into<String>, measured: f64) -> Self {
        let mut case = Self::new(name, measured, f64::NEG_INFINITY, Relation::AtLeast);
        case.tolerance = 0.0;
        case.margin = 0.0;
        case.pass = true;
        case
    }

    fn new(name: impl Into<String>, measured: f64, tolerance: f64, relation: Relation) -> Self {
        let margin = match relation {
            Relation::AtMost => tolerance - measured,
            Relation::AtLeast => measured - tolerance,
        };
        // NaN margins fail.
        let pass = margin >= 0.0;
        Self {
            name: name.into(),
            inputs: BTreeMap::new(),
            values: BTreeMap::new(),
            measured,
            tolerance,
            relation,
            margin: if margin.is_finite() { margin } else { 0.0 },
            pass,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_owned(), value.into());
        self
    }

    pub fn value(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.values.insert(key.to_owned(), value.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_margin: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
    pub version: String,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            cases: Vec::new(),
            summary: Summary {
                pass: true,
                ..Summary::default()
            },
            version: ARTIFACT_VERSION.to_owned(),
        }
    }

    pub fn from_cases(command: impl Into<String>, cases: Vec<CaseRecord>) -> Self {
        let mut report = Self::new(command);
        report.extend(cases);
        report
    }

    pub fn push(&mut self, case: CaseRecord) {
        self.cases.push(case);
        self.refresh();
    }

    pub fn extend(&mut self, cases: impl IntoIterator<Item = CaseRecord>) {
        self.cases.extend(cases);
        self.refresh();
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.extend(other.cases);
    }

    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    pub fn case(&self, name: &str) -> Option<&CaseRecord> {
        self.cases.iter().find(|c| c.name == name)
    }

    fn refresh(&mut self) {
        let passed = self.cases.iter().filter(|c| c.pass).count();
        self.summary = Summary {
            cases: self.cases.len(),
            passed,
            failed: self.cases.len() - passed,
            worst_margin: self
                .cases
                .iter()
                .map(|c| c.margin)
                .fold(f64::INFINITY, f64::min)
                .min(f64::MAX),
            pass: passed == self.cases.len(),
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
