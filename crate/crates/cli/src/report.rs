//! Check records and the run report.

use std::collections::BTreeMap;

use laumon::series::{ExponentVector, SeriesRecord};
use laumon::{ExactScalar, TruncatedSeries};
use serde::Serialize;

use crate::config::RunConfig;
use crate::ledger::LedgerResolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One executed check. Both sides are kept in exact form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    /// First degree where the sides differ, if they are series.
    pub degree: Option<ExponentVector>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn boolean(name: impl Into<String>, ok: bool, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs: lhs.into(),
            rhs: rhs.into(),
            degree: None,
        }
    }

    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self::boolean(name, false, format!("error: {err}"), "")
    }

    pub fn scalars(name: impl Into<String>, lhs: &ExactScalar, rhs: &ExactScalar) -> Self {
        Self::boolean(name, lhs == rhs, lhs.to_string(), rhs.to_string())
    }

    /// Coefficient-by-coefficient comparison; errors on either side fail the check.
    pub fn series<E: std::fmt::Display>(
        name: impl Into<String>,
        lhs: std::result::Result<TruncatedSeries, E>,
        rhs: std::result::Result<TruncatedSeries, E>,
    ) -> Self {
        let name = name.into();
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => {
                let diff = a.diff(&b);
                let mut rec = Self::boolean(name, diff.is_empty(), a.to_string(), b.to_string());
                rec.degree = diff
                    .iter()
                    .map(|(e, _, _)| e)
                    .min_by_key(|e| (laumon::series::total_degree(e), (*e).clone()))
                    .cloned();
                rec
            }
            (Err(e), _) | (_, Err(e)) => Self::error(name, e),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub ledger: String,
    pub ledger_evidence: Option<LedgerResolution>,
    pub series: BTreeMap<String, Vec<SeriesRecord>>,
    pub checks: Vec<CheckRecord>,
    pub timing_ms: BTreeMap<String, u128>,
    pub passed: bool,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }
}
