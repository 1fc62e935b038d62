//! Law-by-law verification reports.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Outcome of one sampled law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawResult {
    pub law_id: String,
    /// The identity being checked, written out as a formula.
    #[serde(rename = "paper_ref")]
    pub statement: String,
    pub samples: usize,
    pub max_residual: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub laws: Vec<LawResult>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, law: LawResult) {
        self.laws.push(law);
    }

    pub fn extend(&mut self, other: Report) {
        self.laws.extend(other.laws);
    }

    pub fn pass(&self) -> bool {
        self.laws.iter().all(|l| l.pass)
    }

    pub fn get(&self, law_id: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law_id == law_id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawResult> {
        self.laws.iter().filter(|l| !l.pass)
    }
}

/// Accumulates residuals for one law.
#[derive(Clone, Debug)]
pub struct Check {
    law_id: String,
    statement: String,
    tol: f64,
    samples: usize,
    max_residual: f64,
    detail: Option<String>,
}

impl Check {
    pub fn new(law_id: &str, statement: &str, tol: f64) -> Self {
        Check {
            law_id: law_id.into(),
            statement: statement.into(),
            tol,
            samples: 0,
            max_residual: 0.0,
            detail: None,
        }
    }

    /// Records one sample; NaN counts as an infinite residual.
    pub fn record(&mut self, residual: f64) {
        self.samples += 1;
        let r = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if r > self.max_residual {
            self.max_residual = r;
        }
    }

    /// Records a sample and, on the first failure, a description of it.
    pub fn record_with(&mut self, residual: f64, describe: impl FnOnce() -> String) {
        let failed_before = self.max_residual > self.tol;
        self.record(residual);
        if !failed_before && self.max_residual > self.tol && self.detail.is_none() {
            self.detail = Some(describe());
        }
    }

    pub fn note(&mut self, detail: String) {
        self.detail = Some(detail);
    }

    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    pub fn finish(self) -> LawResult {
        LawResult {
            pass: self.max_residual <= self.tol,
            law_id: self.law_id,
            statement: self.statement,
            samples: self.samples,
            max_residual: self.max_residual,
            detail: self.detail,
        }
    }

    /// Finishes with an explicit verdict (for laws that are not residual based).
    pub fn finish_with(self, pass: bool) -> LawResult {
        let mut r = self.finish();
        r.pass = pass;
        r
    }
}
