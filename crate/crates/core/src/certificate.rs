//! Named pass/fail checks attached to reports.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Certificate {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Certificate { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn all_passed(certs: &[Certificate]) -> bool {
    certs.iter().all(|c| c.passed)
}
