//! Structured results of identity checks.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The first failing input of a check and both evaluated sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

/// `{check, status, cases, counterexample?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    /// Number of basis tuples examined.
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
}

impl Report {
    pub fn pass(check: impl Into<String>, cases: usize) -> Self {
        Report {
            check: check.into(),
            status: Status::Pass,
            cases,
            counterexample: None,
        }
    }

    pub fn fail(check: impl Into<String>, cases: usize, cx: Counterexample) -> Self {
        Report {
            check: check.into(),
            status: Status::Fail,
            cases,
            counterexample: Some(cx),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Runs `case` over `inputs` in parallel; the counterexample reported is
    /// the first in input order, independent of scheduling.
    pub fn sweep<T, F>(check: impl Into<String>, inputs: Vec<T>, case: F) -> Self
    where
        T: Send + Sync,
        F: Fn(&T) -> Option<Counterexample> + Sync,
    {
        let cases = inputs.len();
        match inputs.par_iter().find_map_first(&case) {
            None => Report::pass(check, cases),
            Some(cx) => Report::fail(check, cases, cx),
        }
    }

    /// Combines sub-reports into one: fails with the first failure.
    pub fn all(check: impl Into<String>, parts: impl IntoIterator<Item = Report>) -> Self {
        let mut cases = 0;
        let mut first = None;
        for p in parts {
            cases += p.cases;
            if first.is_none() && !p.passed() {
                let mut cx = p.counterexample.unwrap_or_else(|| Counterexample {
                    inputs: vec![],
                    lhs: String::new(),
                    rhs: String::new(),
                });
                cx.inputs.insert(0, p.check);
                first = Some(cx);
            }
        }
        match first {
            None => Report::pass(check, cases),
            Some(cx) => Report::fail(check, cases, cx),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(f, "[{tag}] {} ({} cases)", self.check, self.cases)?;
        if let Some(cx) = &self.counterexample {
            write!(
                f,
                "\n       at ({}): lhs = {}, rhs = {}",
                cx.inputs.join(", "),
                cx.lhs,
                cx.rhs
            )?;
        }
        Ok(())
    }
}

/// Compares two printed sides and builds a counterexample on mismatch.
pub(crate) fn mismatch<T: PartialEq>(
    inputs: impl FnOnce() -> Vec<String>,
    lhs: &T,
    rhs: &T,
    show: impl Fn(&T) -> String,
) -> Option<Counterexample> {
    (lhs != rhs).then(|| Counterexample {
        inputs: inputs(),
        lhs: show(lhs),
        rhs: show(rhs),
    })
}
