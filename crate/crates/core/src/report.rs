//! Check reports shared by every verification routine.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Computed and internally cross-validated, but different from the
    /// constant stated in the cited result.
    DiscrepancyFlagged,
    SkippedCapacity,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DiscrepancyFlagged => "discrepancy-flagged",
            Status::SkippedCapacity => "skipped-capacity",
        };
        f.write_str(s)
    }
}

/// One verification outcome. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub computed: String,
    pub paper_claim: Option<String>,
    pub citation: String,
    pub status: Status,
    pub runtime_ms: Option<u64>,
}

impl CheckReport {
    pub fn new(check: &str, citation: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            suite: String::new(),
            params: BTreeMap::new(),
            computed: String::new(),
            paper_claim: None,
            citation: citation.to_string(),
            status: Status::Fail,
            runtime_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn computed(mut self, value: impl Into<String>) -> Self {
        self.computed = value.into();
        self
    }

    pub fn claim(mut self, value: impl Into<String>) -> Self {
        self.paper_claim = Some(value.into());
        self
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn pass_if(self, ok: bool) -> Self {
        self.status(if ok { Status::Pass } else { Status::Fail })
    }

    /// Pass when `agrees_with_claim`, flagged otherwise; a failed internal
    /// check overrides both.
    pub fn verdict(self, internally_valid: bool, agrees_with_claim: bool) -> Self {
        let s = match (internally_valid, agrees_with_claim) {
            (false, _) => Status::Fail,
            (true, true) => Status::Pass,
            (true, false) => Status::DiscrepancyFlagged,
        };
        self.status(s)
    }

    /// Converts an error raised while running the check: capacity errors
    /// become `skipped-capacity`, anything else is a failure.
    pub fn from_error(self, err: &Error) -> Self {
        let status = match err {
            Error::Capacity { .. } => Status::SkippedCapacity,
            _ => Status::Fail,
        };
        self.computed(format!("error: {err}")).status(status)
    }

    pub fn is_ok(&self) -> bool {
        self.status != Status::Fail
    }

    /// Sort key used to canonicalize report order.
    pub fn sort_key(&self) -> (String, String, Vec<(String, String)>) {
        let params = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), format!("{v:0>12}")))
            .collect();
        (self.suite.clone(), self.check.clone(), params)
    }
}

/// Runs `f`, turning its error (if any) into a report.
pub fn guarded(
    base: CheckReport,
    f: impl FnOnce(CheckReport) -> crate::error::Result<CheckReport>,
) -> CheckReport {
    let fallback = base.clone();
    match f(base) {
        Ok(r) => r,
        Err(e) => fallback.from_error(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_in_fixed_order() {
        let r = CheckReport::new("demo", "Lemma 8.2")
            .param("p", 3)
            .computed("3")
            .pass_if(true);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"check":"demo","suite":"","params":{"p":"3"},"computed":"3","paper_claim":null,"citation":"Lemma 8.2","status":"pass","runtime_ms":null}"#
        );
        let back: CheckReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn capacity_errors_are_skips() {
        let err = Error::Capacity {
            what: "x".into(),
            needed: 10,
            limit: 1,
        };
        let r = CheckReport::new("demo", "c").from_error(&err);
        assert_eq!(r.status, Status::SkippedCapacity);
        let r = CheckReport::new("demo", "c").from_error(&Error::Degenerate("y".into()));
        assert_eq!(r.status, Status::Fail);
    }
}
