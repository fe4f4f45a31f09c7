//! The unit of CLI output: a named check with parameters, a status and exact
//! decimal witnesses. Reports are deterministic given their parameters; the
//! timing field is the one exception and is excluded from comparisons.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
    Inapplicable,
    Monitored,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
            Status::Inapplicable => "inapplicable",
            Status::Monitored => "monitored",
        };
        f.write_str(s)
    }
}

/// Witness values are decimal strings, never floating point, so no consumer
/// can lose precision.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub witnesses: BTreeMap<String, String>,
    pub convention: BTreeMap<String, String>,
    pub duration_ms: u128,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            status: Status::Indeterminate,
            witnesses: BTreeMap::new(),
            convention: BTreeMap::new(),
            duration_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn witness(mut self, key: &str, value: impl ToString) -> Self {
        self.witnesses.insert(key.to_string(), value.to_string());
        self
    }

    pub fn convention(mut self, key: &str, value: impl ToString) -> Self {
        self.convention.insert(key.to_string(), value.to_string());
        self
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    /// Pass/fail from a boolean check.
    pub fn verdict(self, ok: bool) -> Self {
        self.status(if ok { Status::Pass } else { Status::Fail })
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    /// Stable identity for caching: check name plus canonical parameters.
    pub fn cache_key(&self) -> String {
        cache_key_for(&self.check, &self.params)
    }
}

/// The cache key a report with this check name and parameter map will carry.
pub fn cache_key_for(check: &str, params: &BTreeMap<String, String>) -> String {
    let mut key = check.to_string();
    for (k, v) in params {
        key.push('\u{1f}');
        key.push_str(k);
        key.push('=');
        key.push_str(v);
    }
    key
}
