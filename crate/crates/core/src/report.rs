use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::MultiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

/// Outcome of one verification case. Failing cases always carry a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub witness: String,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Report {
        Report {
            name: name.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            witness: String::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Report {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn passed(mut self, witness: impl Into<String>) -> Report {
        self.status = Status::Pass;
        self.witness = witness.into();
        self
    }

    pub fn failed(mut self, witness: impl Into<String>) -> Report {
        self.status = Status::Fail;
        self.witness = witness.into();
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Report {
        self.status = Status::Skipped;
        self.witness = reason.into();
        self
    }

    /// Passes iff `diff` is the zero polynomial; the witness is `diff`.
    pub fn zero_check(self, diff: &MultiPoly) -> Report {
        if diff.is_zero() {
            self.passed("0")
        } else {
            self.failed(diff.to_string())
        }
    }

    /// Passes iff `ok`; `witness` is recorded either way.
    pub fn check(self, ok: bool, witness: impl Into<String>) -> Report {
        if ok {
            self.passed(witness)
        } else {
            self.failed(witness)
        }
    }

    /// Folds sub-checks: passes iff every part passes. The witness is that
    /// of the first failure, or `pass_witness`.
    pub fn all(self, parts: impl IntoIterator<Item = Report>, pass_witness: impl Into<String>) -> Report {
        for part in parts {
            if part.status == Status::Fail {
                let mut label = part.name.clone();
                if !part.params.is_empty() {
                    let params: Vec<String> =
                        part.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    label = format!("{label}[{}]", params.join(","));
                }
                return self.failed(format!("{label}: {}", part.witness));
            }
        }
        self.passed(pass_witness)
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.status, self.name)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        if !self.witness.is_empty() {
            write!(f, " :: {}", self.witness)?;
        }
        Ok(())
    }
}
